#pragma once

#include <string>
#include <string_view>

namespace qtrl {

// SHA-1 digest as a lowercase hex string.
std::string sha1_hex(std::string_view data);

// Hash of "blob <len>\0<content>", the scheme git uses for file contents.
std::string git_blob_sha1(std::string_view content);

}  // namespace qtrl
