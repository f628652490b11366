#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "coarselab/cli.hpp"
#include "coarselab/errors.hpp"
#include "internal.hpp"

namespace coarselab::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256: digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

Json Manifest::to_json() const {
  return Json{{"command", command},
              {"inputs", inputs},
              {"params", params},
              {"version", kVersion},
              {"wall_time_s", wall_time_s}};
}

}  // namespace coarselab::cli
