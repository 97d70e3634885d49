#include "qtrl/policy_export.hpp"

#include <cmath>

#include <json.hpp>

#include "qtrl/errors.hpp"
#include "qtrl/run_io.hpp"

namespace qtrl::io {

namespace {

using nlohmann::json;

const char* head_name(nn::Head head) {
  return head == nn::Head::kSoftmax ? "softmax" : "linear";
}

nn::Head head_from_name(const std::string& name) {
  if (name == "softmax") return nn::Head::kSoftmax;
  if (name == "linear") return nn::Head::kLinear;
  throw IoError("unknown output head '" + name + "' in policy file");
}

void append_quoted(std::string& out, const std::string& value) {
  out += '"';
  for (char c : value) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

}  // namespace

std::string to_json(const ExportedPolicy& policy) {
  nn::validate(policy.policy_spec);
  std::string out;
  out.reserve(policy.theta.size() * 24 + 512);
  out += "{\n  \"format\": \"qtrl-policy\",\n  \"version\": 1,\n";
  out += "  \"policy_spec\": {\n    \"layer_sizes\": [";
  for (std::size_t i = 0; i < policy.policy_spec.layer_sizes.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(policy.policy_spec.layer_sizes[i]);
  }
  out += "],\n    \"hidden_activation\": \"relu\",\n    \"output_head\": ";
  append_quoted(out, head_name(policy.policy_spec.output_head));
  out += "\n  },\n  \"theta\": [";
  for (std::size_t i = 0; i < policy.theta.size(); ++i) {
    if (i) out += ", ";
    out += format_double(policy.theta[i]);
  }
  out += "],\n  \"provenance\": {\n    \"env\": ";
  append_quoted(out, policy.provenance.env);
  out += ",\n    \"mode\": ";
  append_quoted(out, policy.provenance.mode);
  out += ",\n    \"depth\": " + std::to_string(policy.provenance.depth);
  out += ",\n    \"qubits\": " + std::to_string(policy.provenance.qubits);
  out += ",\n    \"seed\": " + std::to_string(policy.provenance.seed);
  out += ",\n    \"episodes\": " + std::to_string(policy.provenance.episodes);
  out += ",\n    \"final_last10\": " + format_double(policy.provenance.final_last10);
  out += ",\n    \"run_id\": ";
  append_quoted(out, policy.provenance.run_id);
  out += "\n  }\n}\n";
  return out;
}

ExportedPolicy policy_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("policy file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "qtrl-policy")
      throw IoError("not a qtrl policy file");

    ExportedPolicy policy;
    const json& spec = doc.at("policy_spec");
    policy.policy_spec.layer_sizes = spec.at("layer_sizes").get<std::vector<int>>();
    policy.policy_spec.hidden_activation = nn::Activation::kRelu;
    policy.policy_spec.output_head =
        head_from_name(spec.at("output_head").get<std::string>());
    try {
      nn::validate(policy.policy_spec);
    } catch (const ConfigError& e) {
      throw IoError(std::string("invalid policy spec in file: ") + e.what());
    }

    policy.theta = doc.at("theta").get<std::vector<double>>();
    const int expected = nn::param_count(policy.policy_spec);
    if (static_cast<int>(policy.theta.size()) != expected)
      throw IoError("theta length mismatch: expected " + std::to_string(expected) +
                    " values, got " + std::to_string(policy.theta.size()));
    for (double v : policy.theta)
      if (!std::isfinite(v)) throw IoError("policy file contains non-finite weights");

    const json& prov = doc.at("provenance");
    policy.provenance.env = prov.at("env").get<std::string>();
    policy.provenance.mode = prov.at("mode").get<std::string>();
    policy.provenance.depth = prov.at("depth").get<int>();
    policy.provenance.qubits = prov.at("qubits").get<int>();
    policy.provenance.seed = prov.at("seed").get<std::uint64_t>();
    policy.provenance.episodes = prov.at("episodes").get<int>();
    policy.provenance.final_last10 = prov.at("final_last10").get<double>();
    policy.provenance.run_id = prov.at("run_id").get<std::string>();
    return policy;
  } catch (const json::exception& e) {
    throw IoError(std::string("policy file is missing required fields: ") + e.what());
  }
}

void save_policy(const std::filesystem::path& path, const ExportedPolicy& policy) {
  write_text_atomic(path, to_json(policy));
}

ExportedPolicy load_policy(const std::filesystem::path& path) {
  return policy_from_json(read_text(path));
}

}  // namespace qtrl::io
