#pragma once

// Run configuration shared by the CLI and the acceptance suite.

#include <cstdint>

#include <json.hpp>

#include "tmotive/context.hpp"
#include "tmotive/json_io.hpp"

namespace tmotive {

struct Config {
  int p = 3;
  int s = 1;
  int D = 0;                 // 0 -> 4s
  std::size_t n = 1;
  std::int64_t prec = 200;   // exponent units at ramification ram
  std::int64_t ram = 0;      // 0 -> q^2 - 1
  std::int64_t v_min = 1;    // neighbourhood threshold, as a valuation
  std::int64_t slack = 10;
  std::uint64_t seed = 1;
  long k_max = 3;

  Context context() const {
    require(p != 2, ErrorKind::domain, "q must be odd");
    require(v_min >= 1, ErrorKind::domain, "v_min must be at least 1");
    require(k_max >= 0 && k_max <= 3, ErrorKind::domain, "k_max must lie in [0, 3]");
    require(n >= 1 && n <= 3, ErrorKind::domain, "n must lie in [1, 3]");
    Context c = Context::make(p, s, D, prec, ram, slack);
    c.vmin = v_min * c.ram;
    return c;
  }
};

inline nlohmann::json to_json(const Config& c) {
  return {{"p", c.p},       {"s", c.s},         {"D", c.D == 0 ? 4 * c.s : c.D}, {"n", c.n}, {"prec", c.prec},
          {"ram", c.ram},   {"v_min", c.v_min}, {"slack", c.slack},            {"seed", c.seed}, {"k_max", c.k_max}};
}

/// Overrides the fields present in `j`.
inline void merge_config(Config& c, const nlohmann::json& j) {
  io::with_schema([&] {
    require(j.is_object(), ErrorKind::schema, "config must be a JSON object");
    if (j.contains("p")) c.p = j.at("p").get<int>();
    if (j.contains("s")) c.s = j.at("s").get<int>();
    if (j.contains("D")) c.D = j.at("D").get<int>();
    if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
    if (j.contains("prec")) c.prec = j.at("prec").get<std::int64_t>();
    if (j.contains("ram")) c.ram = j.at("ram").get<std::int64_t>();
    if (j.contains("v_min")) c.v_min = j.at("v_min").get<std::int64_t>();
    if (j.contains("slack")) c.slack = j.at("slack").get<std::int64_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("k_max")) c.k_max = j.at("k_max").get<long>();
    return 0;
  });
}

}  // namespace tmotive
