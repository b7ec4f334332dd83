#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tmotive/config.hpp"
#include "tmotive/json_io.hpp"
#include "tmotive/sampling.hpp"

using namespace tmotive;
using nlohmann::json;
using tmotive::test::ctx3;
using tmotive::test::error_kind;

TEST(Json, ElementAndSeriesRoundTrip) {
  const Context& c = ctx3();
  EXPECT_EQ(io::ffelem_from_json(c.field, io::to_json(c.omega)), c.omega);
  Sampler s(c, 1);
  const CinfElem x = s.small_series(-3, 20, 5);
  EXPECT_EQ(io::series_from_json(c.field, io::to_json(x)), x);
  const CMatrix m = s.small_matrix(2, 1);
  EXPECT_EQ(io::matrix_from_json(c.field, io::to_json(m)), m);
}

TEST(Json, GammaRoundTrip) {
  const Context& c = ctx3();
  Sampler s(c, 2);
  const GammaElem g = s.gamma_s0(2, 2);
  const GammaElem h = io::gamma_from_json(c.field, io::to_json(g));
  EXPECT_EQ(h.k, g.k);
  EXPECT_EQ(h.G, g.G);
  EXPECT_EQ(h.H, g.H);
}

TEST(Json, SchemaErrors) {
  const Context& c = ctx3();
  auto kind = [&](const char* text) {
    return error_kind([&] { io::with_schema([&] { return io::series_from_json(c.field, json::parse(text)); }); });
  };
  EXPECT_EQ(kind(R"({"ram": 8, "prec": 10})"), ErrorKind::schema);
  EXPECT_EQ(kind(R"({"ram": 8, "prec": 10, "terms": [[3, [1, 0, 0, 0]], [2, [1, 0, 0, 0]]]})"), ErrorKind::schema);
  EXPECT_EQ(kind(R"({"ram": 8, "prec": 10, "terms": [[12, [1, 0, 0, 0]]]})"), ErrorKind::schema);
  EXPECT_EQ(kind(R"({"ram": 8, "prec": 10, "terms": [[1, [1, 0, 0]]]})"), ErrorKind::schema);
  EXPECT_EQ(kind(R"({"ram": 8, "prec": 10, "terms": [[1, [3, 0, 0, 0]]]})"), ErrorKind::schema);
  EXPECT_EQ(kind(R"({"ram": 0, "prec": 10, "terms": []})"), ErrorKind::schema);
  EXPECT_EQ(kind(R"({"ram": "8", "prec": 10, "terms": []})"), ErrorKind::schema);
  EXPECT_EQ(error_kind([&] { io::matrix_from_json(c.field, json::parse("[[], []]")); }), ErrorKind::schema);
  EXPECT_EQ(error_kind([&] { io::gamma_from_json(c.field, json::parse(R"({"k": -1, "G": [[[]]], "H": [[[]]]})")); }),
            ErrorKind::schema);
  EXPECT_EQ(error_kind([&] { io::read_file("/nonexistent/file.json"); }), ErrorKind::schema);
}

TEST(Config, MergeAndValidate) {
  Config cfg;
  merge_config(cfg, json::parse(R"({"p": 5, "prec": 150, "seed": 9})"));
  EXPECT_EQ(cfg.p, 5);
  EXPECT_EQ(cfg.prec, 150);
  EXPECT_EQ(cfg.seed, 9u);
  const Context c = cfg.context();
  EXPECT_EQ(c.ram, 24);
  EXPECT_EQ(c.vmin, 24);
  EXPECT_EQ(to_json(cfg).at("D"), 4);
  Config bad;
  bad.p = 2;
  EXPECT_EQ(error_kind([&] { bad.context(); }), ErrorKind::domain);
  bad = Config{};
  bad.k_max = 4;
  EXPECT_EQ(error_kind([&] { bad.context(); }), ErrorKind::domain);
  bad = Config{};
  bad.prec = 30;
  EXPECT_EQ(error_kind([&] { bad.context(); }), ErrorKind::domain);
  EXPECT_EQ(error_kind([&] { merge_config(cfg, json::parse(R"({"p": "three"})")); }), ErrorKind::schema);
  EXPECT_EQ(error_kind([&] { merge_config(cfg, json::parse("[1]")); }), ErrorKind::schema);
}
