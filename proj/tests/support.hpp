#pragma once

#include <map>
#include <mutex>
#include <string>

#include "bianchi/domain.hpp"
#include "bianchi/ring.hpp"

namespace testing {

inline const bianchi::FundamentalDomain& domain(int64_t d) {
  static std::mutex mu;
  static std::map<int64_t, bianchi::FundamentalDomain> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, bianchi::load_or_compute_domain(d, BIANCHI_TEST_CACHE)).first;
  return it->second;
}

inline std::string cert_path(const std::string& name) { return std::string(BIANCHI_CERT_DIR) + "/" + name; }

inline bianchi::QuadIdeal ideal(int64_t d, const std::string& text) {
  return bianchi::ideal_from_generators(d, bianchi::parse_ideal_literal(d, text));
}

}  // namespace testing
