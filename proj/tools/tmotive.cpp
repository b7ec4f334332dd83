// tmotive: command-line driver. Every subcommand prints (or writes with --out)
// one JSON report. Exit codes: 0 success, 1 acceptance failures, 2 bad
// arguments or rejected input, 3 malformed JSON, 4 precision exhausted,
// 5 non-contraction, 6 singular matrix or missing root, 7 internal error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmotive/acceptance.hpp"
#include "tmotive/config.hpp"
#include "tmotive/isomsolver.hpp"
#include "tmotive/json_io.hpp"
#include "tmotive/latticemap.hpp"

using namespace tmotive;
using nlohmann::json;

namespace {

struct Common {
  std::string config_file;
  std::optional<int> q, p, s, D;
  std::optional<std::int64_t> prec, ram, slack, v_min;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<long> k_max;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_file, "JSON config file (fields of Config)");
  app->add_option("--q", c.q, "field size q = p^s (odd)");
  app->add_option("--p", c.p, "characteristic");
  app->add_option("--s", c.s, "q = p^s");
  app->add_option("--D", c.D, "ambient degree over F_p (default 4s)");
  app->add_option("--prec", c.prec, "absolute precision in exponent units");
  app->add_option("--ram", c.ram, "ramification N (default q^2 - 1)");
  app->add_option("--slack", c.slack, "precision slack in exponent units");
  app->add_option("--v-min", c.v_min, "neighbourhood threshold v(A) >= v_min");
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--n", c.n, "dimension n");
  app->add_option("--k-max", c.k_max, "degree cap for gamma");
  app->add_option("--out", c.out, "write the report here instead of stdout");
}

Config resolve(const Common& c) {
  Config cfg;
  if (!c.config_file.empty()) merge_config(cfg, io::read_file(c.config_file));
  if (c.q) {
    int q = *c.q, p = 2;
    require(q > 1, ErrorKind::domain, "q must exceed 1");
    while (q % p != 0) ++p;
    int s = 0;
    for (int x = q; x > 1; x /= p) {
      require(x % p == 0, ErrorKind::domain, "q must be a prime power");
      ++s;
    }
    cfg.p = p;
    cfg.s = s;
  }
  if (c.p) cfg.p = *c.p;
  if (c.s) cfg.s = *c.s;
  if (c.D) cfg.D = *c.D;
  if (c.prec) cfg.prec = *c.prec;
  if (c.ram) cfg.ram = *c.ram;
  if (c.slack) cfg.slack = *c.slack;
  if (c.v_min) cfg.v_min = *c.v_min;
  if (c.seed) cfg.seed = *c.seed;
  if (c.n) cfg.n = *c.n;
  if (c.k_max) cfg.k_max = *c.k_max;
  return cfg;
}

void emit(const Common& c, const json& j) {
  if (c.out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(c.out);
  require(f.good(), ErrorKind::domain, "cannot write " + c.out);
  f << j.dump(2) << "\n";
}

json header(const Config& cfg, const Context& ctx) {
  return {{"config", to_json(cfg)}, {"field", io::to_json(ctx.field->spec())}, {"omega", io::to_json(ctx.omega)}};
}

CMatrix read_matrix(const Context& ctx, const std::string& path) {
  return io::with_schema([&] { return io::matrix_from_json(ctx.field, io::read_file(path)); });
}

json residual_json(const ResidualReport& r) {
  json out = json::array();
  for (std::size_t i = 0; i < r.names.size(); ++i) out.push_back({{"relation", r.names[i]}, {"order", r.orders[i]}, {"zero", r.zero[i]}});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice map and isomorphism solver for T-motives T e = theta e + A tau e + tau^2 e"};
  app.require_subcommand(1);

  Common c;
  std::int64_t imax = 8;
  std::string a_file, gamma_file, z_file;
  std::int64_t e1 = 0, e2 = 0, high_prec = 0;

  auto* period = app.add_subcommand("period", "period y0 of the rank-2 Carlitz module");
  add_common(period, c);

  auto* expc = app.add_subcommand("exp-coeffs", "coefficients C_0..C_imax of Exp_A");
  add_common(expc, c);
  expc->add_option("--imax", imax, "last index")->check(CLI::Range(0, 64));
  expc->add_option("--A", a_file, "A as a JSON matrix (default 0)");

  auto* lmap = app.add_subcommand("lattice-map", "lattice and Siegel matrix of M(A)");
  add_common(lmap, c);
  lmap->add_option("--A", a_file, "A as a JSON matrix")->required();

  auto* mob = app.add_subcommand("mobius", "(P Z + Q)(R Z + S)^{-1} for gamma = (G, omega^2 H; H, G)");
  add_common(mob, c);
  mob->add_option("--gamma", gamma_file, "gamma as {k, G, H}")->required();
  mob->add_option("--Z", z_file, "Z as a JSON matrix")->required();

  auto* iso = app.add_subcommand("iso-solve", "solve for B and Phi with M(A) ~ M(B) along gamma");
  add_common(iso, c);
  iso->add_option("--A", a_file, "A as a JSON matrix")->required();
  iso->add_option("--gamma", gamma_file, "gamma as {k, G, H}")->required();

  auto* slope = app.add_subcommand("slope-check", "first-order slope of a -> mu13(a) at 0 (n = 1)");
  add_common(slope, c);
  slope->add_option("--e1", e1, "first probe exponent (default 8N)");
  slope->add_option("--e2", e2, "second probe exponent (default 12N)");

  auto* acc = app.add_subcommand("accept", "run the acceptance suite");
  add_common(acc, c);
  acc->add_option("--high-prec", high_prec, "precision of the soundness re-run (default prec + 100)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorKind::domain);
  }

  try {
    const Config cfg = resolve(c);
    const Context ctx = cfg.context();
    json rep = header(cfg, ctx);

    if (*period) {
      RootStats st;
      const CinfElem y0 = carlitz_period(ctx, &st);
      rep["y0"] = io::to_json(y0);
      rep["valuation"] = y0.valuation().str();
      rep["exponent"] = y0.order();
      rep["residual_orders"] = st.residual_orders;
    } else if (*expc) {
      const CMatrix A = a_file.empty() ? ctx.zeros(cfg.n, cfg.n) : read_matrix(ctx, a_file);
      const ExpCoeffs C = exp_coeffs(make_tmotive(ctx, A), static_cast<std::size_t>(imax));
      json list = json::array();
      for (const auto& m : C.C) list.push_back(io::to_json(m));
      rep["C"] = list;
    } else if (*lmap) {
      const TMotive M = make_tmotive(ctx, read_matrix(ctx, a_file));
      const CinfElem y0 = carlitz_period(ctx);
      const Lattice L = lattice_of(M, y0);
      const CMatrix Z = siegel_of(L);
      const RankCertificate rc = rank_certificate(ctx, Z);
      const auto rec = recover_change_of_basis(ctx, mu34(ctx, Z), L.basis, 2 * cfg.k_max + 4);
      json iters = json::array();
      for (const auto& s : L.stats) iters.push_back(s.residual_orders);
      rep["lattice"] = io::to_json(L.basis);
      rep["Z"] = io::to_json(Z);
      rep["rank_certificate"] = rc.ok;
      rep["same_module_as_mu34"] = rec.has_value();
      if (rec) rep["change_of_basis"] = {{"degree", rec->degree}, {"C", io::to_json(rec->C)}};
      rep["root_residual_orders"] = iters;
    } else if (*mob) {
      const GammaElem g = io::with_schema([&] { return io::gamma_from_json(ctx.field, io::read_file(gamma_file)); });
      g.validate(ctx.omega);
      const CMatrix Z = read_matrix(ctx, z_file);
      rep["Z"] = io::to_json(mobius(ctx, g.matrix(ctx.omega), Z));
    } else if (*iso) {
      const CMatrix A = read_matrix(ctx, a_file);
      const GammaElem g = io::with_schema([&] { return io::gamma_from_json(ctx.field, io::read_file(gamma_file)); });
      require(g.k <= cfg.k_max, ErrorKind::domain, "gamma degree bound exceeds k_max");
      const IsoReport t = iso_check(ctx, carlitz_period(ctx), A, g);
      const IsoSolution& s = t.sol;
      rep["B"] = io::to_json(s.B);
      rep["Phi"] = io::to_json(s.Phi);
      rep["picard_update_orders"] = s.update_orders;
      rep["residuals"] = residual_json(s.residuals);
      rep["detW1"] = io::to_json(s.system.detW1);
      rep["detgamma"] = io::to_json(t.det_gamma);
      rep["det_alpha"] = io::to_json(t.det_alpha);
      rep["det_phi"] = io::to_json(s.det_phi);
      rep["flags"] = {{"residuals_ok", t.residuals_ok},
                      {"det_phi_unit", s.det_phi_unit},
                      {"detW1_constant", s.system.det_constant},
                      {"detW1_eq_detgamma", t.detw1_eq_det_gamma},
                      {"detW1_in_Fq", t.detw1_in_fq},
                      {"detW1_eq_pm_det_alpha_pow_n", t.detw1_vs_alpha},
                      {"norm_det_alpha_eq_detgamma", t.norm_alpha_eq_det_gamma},
                      {"layout_check", s.system.layout_check},
                      {"closing_identity_at_theta", s.system.closing_identity},
                      {"siegel_gamma_sharp", t.siegel_sharp},
                      {"siegel_literal", t.siegel_literal},
                      {"lattices_equal", t.lattice_equal}};
    } else if (*slope) {
      const CinfElem y0 = carlitz_period(ctx);
      const SlopeReport sr = slope_check(ctx, y0, e1 ? e1 : 8 * ctx.ram, e2 ? e2 : 12 * ctx.ram);
      const FirstOrder fo = first_order(ctx, y0);
      rep["slope1"] = io::to_json(sr.slope1);
      rep["slope2"] = io::to_json(sr.slope2);
      rep["predicted"] = io::to_json(sr.predicted);
      rep["d10"] = io::to_json(fo.d10);
      rep["d10p"] = io::to_json(fo.d10p);
      rep["orders"] = {{"prediction", sr.v_pred}, {"between_slopes", sr.v_between}, {"to_prediction", sr.v_to_pred}};
      rep["pass"] = sr.ok;
    } else if (*acc) {
      const accept::SuiteReport s = accept::run_suite(cfg, high_prec);
      for (const auto& r : s.results) std::cerr << accept::format_line(r) << "\n";
      emit(c, s.to_json(cfg));
      return s.all_pass() ? 0 : 1;
    }
    emit(c, rep);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 7;
  }
}
