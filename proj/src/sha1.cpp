#include "qtrl/sha1.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>

namespace qtrl {

namespace {

inline std::uint32_t rotl(std::uint32_t x, int s) {
  return (x << s) | (x >> (32 - s));
}

struct Sha1 {
  std::array<std::uint32_t, 5> h{0x67452301u, 0xefcdab89u, 0x98badcfeu,
                                 0x10325476u, 0xc3d2e1f0u};
  std::uint64_t total = 0;
  std::array<unsigned char, 64> block{};
  std::size_t fill = 0;

  void process(const unsigned char* p) {
    std::uint32_t w[80];
    for (int i = 0; i < 16; ++i)
      w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
             (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
    for (int i = 16; i < 80; ++i)
      w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);

    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int i = 0; i < 80; ++i) {
      std::uint32_t f, k;
      if (i < 20) {
        f = (b & c) | (~b & d);
        k = 0x5a827999u;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ed9eba1u;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8f1bbcdcu;
      } else {
        f = b ^ c ^ d;
        k = 0xca62c1d6u;
      }
      const std::uint32_t tmp = rotl(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = rotl(b, 30);
      b = a;
      a = tmp;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
  }

  void update(const unsigned char* data, std::size_t len) {
    total += len;
    while (len > 0) {
      const std::size_t take = std::min(len, block.size() - fill);
      std::memcpy(block.data() + fill, data, take);
      fill += take;
      data += take;
      len -= take;
      if (fill == block.size()) {
        process(block.data());
        fill = 0;
      }
    }
  }

  std::string finish() {
    const std::uint64_t bits = total * 8;
    const unsigned char one = 0x80;
    update(&one, 1);
    const unsigned char zero = 0x00;
    while (fill != 56) update(&zero, 1);
    unsigned char len_be[8];
    for (int i = 0; i < 8; ++i)
      len_be[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
    update(len_be, 8);

    static const char* hex = "0123456789abcdef";
    std::string out(40, '0');
    for (int i = 0; i < 5; ++i)
      for (int b = 0; b < 4; ++b) {
        const unsigned char byte = static_cast<unsigned char>(h[i] >> (24 - 8 * b));
        out[8 * i + 2 * b] = hex[byte >> 4];
        out[8 * i + 2 * b + 1] = hex[byte & 0xf];
      }
    return out;
  }
};

}  // namespace

std::string sha1_hex(std::string_view data) {
  Sha1 state;
  state.update(reinterpret_cast<const unsigned char*>(data.data()), data.size());
  return state.finish();
}

std::string git_blob_sha1(std::string_view content) {
  Sha1 state;
  std::string header = "blob " + std::to_string(content.size());
  header.push_back('\0');
  state.update(reinterpret_cast<const unsigned char*>(header.data()), header.size());
  state.update(reinterpret_cast<const unsigned char*>(content.data()), content.size());
  return state.finish();
}

}  // namespace qtrl
