#pragma once

// Acceptance suite: criteria 1-9, each returning a pass flag, a one-line
// summary and a JSON detail record. Numeric outputs are recorded in a
// fingerprint so that a re-run at higher precision can be compared with
// the working-precision run (criterion 8).

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmotive/config.hpp"
#include "tmotive/isomsolver.hpp"
#include "tmotive/json_io.hpp"
#include "tmotive/latticemap.hpp"
#include "tmotive/modrecover.hpp"
#include "tmotive/sampling.hpp"

namespace tmotive::accept {

using nlohmann::json;

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;
  json detail = json::object();
};

using Fingerprint = std::map<std::string, CinfElem>;

inline void record(Fingerprint* fp, const std::string& key, const CinfElem& x) {
  if (fp) (*fp)[key] = x;
}
inline void record(Fingerprint* fp, const std::string& key, const CMatrix& m) {
  if (!fp) return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) (*fp)[key + "[" + std::to_string(i) + "," + std::to_string(j) + "]"] = m(i, j);
}
inline void record(Fingerprint* fp, const std::string& key, const PMatrix& m) {
  if (!fp) return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (std::size_t d = 0; d < m(i, j).size(); ++d)
        (*fp)[key + "[" + std::to_string(i) + "," + std::to_string(j) + "]T^" + std::to_string(d)] = m(i, j)[d];
}

inline bool zero_to(const CMatrix& m, std::int64_t level) {
  for (const auto& x : m.data())
    if (!x.is_zero() || x.prec() < level) return false;
  return true;
}

/// Shared state for one run of the suite.
struct Run {
  Config cfg;
  Context ctx;
  CinfElem y0;
  Fingerprint* fp = nullptr;

  Run(const Config& c, Fingerprint* f) : cfg(c), ctx(c.context()), fp(f) { y0 = carlitz_period(ctx); }
  Sampler sampler(std::uint64_t salt) const { return Sampler(ctx, cfg.seed * 1000003ULL + salt); }
};

// 1. Closed form of the exponential at A = 0.
inline CriterionResult criterion1(Run& r) {
  CriterionResult out{1, "Carlitz closed form", false, {}};
  const Context& ctx = r.ctx;
  const auto M = base_motive(ctx, 1);
  const ExpCoeffs c = exp_coeffs(M, 8);
  const std::int64_t P = ctx.prec;
  bool ok = true;
  int matched = 0;
  for (std::int64_t i = 1; i <= 4; ++i) {
    CinfElem prod = ctx.one();
    for (std::int64_t j = 0; j < i; ++j) prod = prod * ctx.theta_ij(2 * i, 2 * j);
    const CinfElem want = prod.inverse();
    const CinfElem got = c.C[static_cast<std::size_t>(2 * i)](0, 0);
    const bool same = got.prec() >= P && want.prec() >= P && got.truncate(P) == want.truncate(P);
    ok = ok && same;
    matched += same;
    out.detail["C" + std::to_string(2 * i)] = {{"match", same}, {"order", got.order()}, {"prec", got.prec()}};
    record(r.fp, "c1/C" + std::to_string(2 * i), got.truncate(P));
  }
  bool odd_zero = true;
  for (std::size_t i = 1; i <= 7; i += 2) odd_zero = odd_zero && c.C[i](0, 0).is_zero();
  ok = ok && odd_zero;
  out.detail["odd_vanish"] = odd_zero;
  out.pass = ok;
  out.summary = std::to_string(matched) + "/4 even coefficients match the product formula; odd coefficients " +
                (odd_zero ? "vanish" : "do not vanish");
  return out;
}

// 2. The period.
inline CriterionResult criterion2(Run& r) {
  CriterionResult out{2, "Carlitz period", false, {}};
  const Context& ctx = r.ctx;
  const std::int64_t q = ctx.q();
  const Valuation v = r.y0.valuation();
  const Valuation want = Valuation::of(-q * q * ctx.ram, (q * q - 1) * ctx.ram);
  const bool val_ok = v.num == want.num && v.den == want.den;
  const auto M = base_motive(ctx, 1);
  ExpCoeffs cache;
  const CMatrix e1 = exp_apply(M, cache, CMatrix(1, 1, r.y0));
  const CMatrix e2 = exp_apply(M, cache, CMatrix(1, 1, r.y0.scaled(ctx.omega)));
  const std::int64_t level = ctx.prec - ctx.slack;
  const bool z1 = zero_to(e1, level), z2 = zero_to(e2, level);
  out.pass = val_ok && z1 && z2;
  out.detail = {{"valuation", v.str()}, {"expected", want.str()}, {"exp_y0_prec", e1(0, 0).prec()},
                {"exp_omega_y0_prec", e2(0, 0).prec()}, {"level", level}};
  out.summary = "v(y0) = " + v.str() + ", Exp0(y0) " + (z1 ? "vanishes" : "does not vanish") + ", Exp0(omega y0) " +
                (z2 ? "vanishes" : "does not vanish") + " to " + std::to_string(level);
  record(r.fp, "c2/y0", r.y0);
  return out;
}

// 3. Functional equation of Exp_A.
inline CriterionResult criterion3(Run& r) {
  CriterionResult out{3, "functional equation", false, {}};
  const Context& ctx = r.ctx;
  const std::int64_t level = ctx.prec - ctx.slack;
  int total = 0, good = 0;
  for (std::size_t n : {1u, 2u}) {
    Sampler s = r.sampler(300 + n);
    for (int a = 0; a < 5; ++a) {
      const CMatrix A = s.small_matrix(n, ctx.vmin);
      const TMotive M = make_tmotive(ctx, A);
      ExpCoeffs cache;
      for (int zi = 0; zi < 20; ++zi) {
        const CMatrix z = s.small_column(n, 0);
        const CMatrix res = functional_residual(M, cache, z);
        ++total;
        good += zero_to(res, level);
        record(r.fp, "c3/n" + std::to_string(n) + "/A" + std::to_string(a) + "/z" + std::to_string(zi), exp_apply(M, cache, z));
      }
    }
  }
  out.pass = good == total;
  out.detail = {{"instances", total}, {"vanishing", good}, {"level", level}};
  out.summary = std::to_string(good) + "/" + std::to_string(total) + " residuals vanish to " + std::to_string(level);
  return out;
}

// 4. First-order behaviour of mu13 at 0 (n = 1).
inline CriterionResult criterion4(Run& r) {
  CriterionResult out{4, "first-order slope", false, {}};
  const Context& ctx = r.ctx;
  const std::int64_t e1 = 8 * ctx.ram, e2 = 12 * ctx.ram;
  const FirstOrder fo = first_order(ctx, r.y0);
  const SlopeReport sr = slope_check(ctx, r.y0, e1, e2);
  const bool l1_ok = !fo.l1.is_zero();
  const CinfElem gap = fo.d10p - fo.d10.scaled(ctx.omega);
  const bool dp_ok = !gap.is_zero();

  // Slopes of the two perturbed roots against -d10 and -d10'.
  bool roots_ok = true;
  json roots = json::array();
  for (std::int64_t e : {e1, e2}) {
    const CinfElem a = ctx.monomial(FFElem::one(ctx.field), e);
    const Lattice L = lattice_of(make_tmotive(ctx, CMatrix(1, 1, a)), r.y0);
    const CinfElem s1 = (L.basis(0, 0) * r.y0 - r.y0) / a;
    const CinfElem s2 = (L.basis(1, 0) * r.y0 - r.y0.scaled(ctx.omega)) / a;
    const std::int64_t o1 = (s1 + fo.d10).order(), o2 = (s2 + fo.d10p).order();
    const bool ok = o1 > fo.d10.order() && o2 > fo.d10p.order();
    roots_ok = roots_ok && ok;
    roots.push_back({{"a_exp", e}, {"unprimed_gap", o1}, {"primed_gap", o2}, {"ok", ok}});
  }
  out.pass = sr.ok && l1_ok && dp_ok && roots_ok;
  out.detail = {{"v_l1", fo.l1.valuation().str()}, {"v_d10", fo.d10.valuation().str()}, {"slope_gap", sr.v_between},
                {"prediction_gap", sr.v_to_pred}, {"v_pred", sr.v_pred}, {"d10p_minus_omega_d10", dp_ok ? gap.valuation().str() : "zero"},
                {"roots", roots}};
  out.summary = "v(l1) = " + fo.l1.valuation().str() + ", slope gaps " + std::to_string(sr.v_between) + " and " +
                std::to_string(sr.v_to_pred) + " exceed " + std::to_string(sr.v_pred) + ": " + (sr.ok ? "yes" : "no") +
                "; d10' != omega d10: " + (dp_ok ? "yes" : "no") + "; root slopes: " + (roots_ok ? "ok" : "bad");
  record(r.fp, "c4/d10", fo.d10);
  record(r.fp, "c4/d10p", fo.d10p);
  record(r.fp, "c4/slope1", sr.slope1);
  record(r.fp, "c4/slope2", sr.slope2);
  return out;
}

// 5. Diagram commutes: lattice_of(M(A)) and mu34(mu13(A)) span the same module.
inline CriterionResult criterion5(Run& r) {
  CriterionResult out{5, "lattice diagram", false, {}};
  const Context& ctx = r.ctx;
  int total = 0, good = 0;
  json inst = json::array();
  for (std::size_t n : {1u, 2u}) {
    Sampler s = r.sampler(500 + n);
    for (int a = 0; a < 5; ++a) {
      const CMatrix A = s.small_matrix(n, ctx.vmin);
      const TMotive M = make_tmotive(ctx, A);
      const Lattice L = lattice_of(M, r.y0);
      const CMatrix Z = siegel_of(L);
      const auto rec = recover_change_of_basis(ctx, mu34(ctx, Z), L.basis, 4);
      const RankCertificate rc = rank_certificate(ctx, Z);

      // A second basis from anchors g0 (y0 E; omega y0 E), g0 constant over F_q:
      // recovery must return g0 up to a scalar.
      const FPMatrix g0 = s.constant_unimodular(n);
      const Lattice L2 = lattice_from_anchors(M, r.y0, at_theta(g0, ctx) * standard_anchors(ctx, r.y0, n));
      const auto rec2 = recover_change_of_basis(ctx, L.basis, L2.basis, 4);
      bool g0_exact = false;
      if (rec2 && rec2->degree == 0) {
        const FFElem c = [&] {
          for (std::size_t i = 0; i < 2 * n; ++i)
            for (std::size_t j = 0; j < 2 * n; ++j)
              if (!g0(i, j).is_zero()) return rec2->C(i, j).coeff(0) / g0(i, j).coeff(0);
          return FFElem::zero(ctx.field);
        }();
        g0_exact = !c.is_zero() && rec2->C == g0.map([&c](const FPoly& x) { return x.scaled(c); });
      }
      const CMatrix g0_res = change_of_basis_residual(ctx, L.basis, L2.basis, g0);
      const bool g0_ok = rec2.has_value() && min_order(g0_res) >= ctx.prec - 2 * ctx.slack;
      // Exp_A vanishes on y0 (u + w Z) E1 for u, w in F_q.
      ExpCoeffs cache;
      bool span_ok = true;
      for (int t = 0; t < 3; ++t) {
        const FFElem u = s.fq_element(), w = s.fq_element();
        const CMatrix row = (ctx.constant(u) * ctx.identity(n) + ctx.constant(w) * Z) * L.E1();
        const CMatrix z = (r.y0 * row.block(0, 0, 1, n)).transpose();
        span_ok = span_ok && zero_to(exp_apply(M, cache, z), ctx.prec - 2 * ctx.slack);
      }
      const bool ok = rec.has_value() && rc.ok && g0_ok && span_ok;
      ++total;
      good += ok;
      inst.push_back({{"n", n}, {"anchor_kernel_dim", rec2 ? rec2->kernel_dim : 0}, {"anchor_change_is_recovered_matrix", g0_exact}, {"recovered", rec.has_value()}, {"degree", rec ? rec->degree : -1}, {"rank_certificate", rc.ok},
                      {"anchor_change_solves", g0_ok}, {"exp_on_span", span_ok}});
      record(r.fp, "c5/n" + std::to_string(n) + "/Z" + std::to_string(a), Z);
    }
  }
  out.pass = good == total;
  out.detail = {{"instances", inst}};
  out.summary = std::to_string(good) + "/" + std::to_string(total) + " instances: same module, rank certificate, anchor change solves the recovery system";
  return out;
}

// 6. Stabiliser of omega E and the composition law.
inline CriterionResult criterion6(Run& r) {
  CriterionResult out{6, "stabiliser action", false, {}};
  const Context& ctx = r.ctx;
  const std::int64_t P = ctx.prec;
  Sampler s = r.sampler(600);
  int fixed = 0, fixed_total = 0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 2);
    const GammaElem g = s.gamma_s0(n, 2);
    const CMatrix wE = ctx.constant(ctx.omega) * ctx.identity(n);
    const CMatrix img = mobius(ctx, g.matrix(ctx.omega), wE);
    ++fixed_total;
    fixed += min_prec(img) >= P && truncate(img, P) == truncate(wE, P);
    record(r.fp, "c6/fix" + std::to_string(i), img);
  }
  int comp = 0;
  const std::int64_t level = P - 2 * ctx.slack;
  for (int i = 0; i < 10; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 2);
    const FPMatrix g1 = (i % 3 == 0) ? s.gamma_s0(n, 1).matrix(ctx.omega) : s.gamma_any(n);
    const FPMatrix g2 = (i % 3 == 1) ? s.gamma_s0(n, 1).matrix(ctx.omega) : s.gamma_any(n);
    const CMatrix Z = ctx.constant(ctx.omega) * ctx.identity(n) + s.small_matrix(n, ctx.ram);
    const CMatrix lhs = mobius(ctx, g1 * g2, Z);
    const CMatrix rhs = mobius(ctx, g1, mobius(ctx, g2, Z));
    comp += agree_to(lhs, rhs, level);
    record(r.fp, "c6/comp" + std::to_string(i), lhs);
  }
  // Informational: elements outside the stabiliser usually move omega E.
  int moved = 0;
  for (int i = 0; i < 10; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 2);
    const CMatrix wE = ctx.constant(ctx.omega) * ctx.identity(n);
    try {
      moved += !agree_to(mobius(ctx, s.gamma_any(n), wE), wE, level);
    } catch (const Error&) {
    }
  }
  out.pass = fixed == fixed_total && comp == 10;
  out.detail = {{"fixed", fixed}, {"fixed_total", fixed_total}, {"composition", comp}, {"outside_moved", moved}};
  out.summary = std::to_string(fixed) + "/" + std::to_string(fixed_total) + " fix omega E bit-exactly; composition " +
                std::to_string(comp) + "/10; " + std::to_string(moved) + "/10 non-stabiliser elements move omega E";
  return out;
}

// 7. The isomorphism pipeline.
inline CriterionResult criterion7(Run& r) {
  CriterionResult out{7, "isomorphism pipeline", false, {}};
  const Context& ctx = r.ctx;
  struct Case {
    std::size_t n;
    long k;
  };
  std::vector<Case> cases;
  for (long k = 0; k <= 2; ++k)
    for (int i = 0; i < 5; ++i) cases.push_back({1, k});
  for (int i = 0; i < 3; ++i) cases.push_back({2, 1});
  Sampler s = r.sampler(700);
  json inst = json::array();
  int converged = 0, residuals = 0, detphi = 0, detw1 = 0, siegel = 0, literal = 0, lattice = 0, alpha_rel = 0,
      closing = 0, layout = 0;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto [n, k] = cases[ci];
    const CMatrix A = s.small_matrix(n, 3 * ctx.ram);
    const GammaElem g = s.gamma_s0(n, k);
    json rec = {{"n", n}, {"k", k}};
    try {
      const IsoReport t = iso_check(ctx, r.y0, A, g);
      ++converged;
      residuals += t.residuals_ok;
      detphi += t.sol.det_phi_unit;
      detw1 += t.detw1_eq_det_gamma;
      siegel += t.siegel_sharp;
      literal += t.siegel_literal;
      lattice += t.lattice_equal;
      alpha_rel += t.detw1_vs_alpha && t.norm_alpha_eq_det_gamma;
      closing += t.sol.system.closing_identity;
      layout += t.sol.system.layout_check;
      rec.update({{"picard_steps", t.sol.update_orders.size()},
                  {"min_residual", t.sol.residuals.min_order()},
                  {"det_phi_unit", t.sol.det_phi_unit},
                  {"detW1", io::to_json(t.sol.system.detW1)},
                  {"det_gamma", io::to_json(t.det_gamma)},
                  {"det_alpha", io::to_json(t.det_alpha)},
                  {"detW1_eq_det_gamma", t.detw1_eq_det_gamma},
                  {"detW1_in_Fq", t.detw1_in_fq},
                  {"siegel_gamma_sharp", t.siegel_sharp},
                  {"siegel_literal", t.siegel_literal},
                  {"lattice_equal", t.lattice_equal}});
      record(r.fp, "c7/" + std::to_string(ci) + "/B", t.sol.B);
      record(r.fp, "c7/" + std::to_string(ci) + "/Phi", t.sol.Phi);
      record(r.fp, "c7/" + std::to_string(ci) + "/ZA", t.ZA);
      record(r.fp, "c7/" + std::to_string(ci) + "/ZB", t.ZB);
    } catch (const Error& e) {
      rec["error"] = e.what();
    }
    inst.push_back(rec);
  }
  const int N = static_cast<int>(cases.size());
  out.pass = converged == N && residuals == N && detphi == N && detw1 == N && siegel == N && lattice == N;
  out.detail = {{"instances", inst}, {"layout_check", layout}, {"closing_identity_at_theta", closing},
                {"detW1_pm_det_alpha_pow_n_and_norm", alpha_rel}};
  std::ostringstream os;
  os << "converged " << converged << "/" << N << ", residuals " << residuals << "/" << N << ", det Phi unit " << detphi << "/" << N
     << ", det W1 = det gamma " << detw1 << "/" << N << ", mobius(gamma#, Z_A) = Z_B " << siegel << "/" << N
     << " (literal orientation " << literal << "/" << N << "), lattices equal " << lattice << "/" << N;
  out.summary = os.str();
  return out;
}

// 9. Negative controls.
inline CriterionResult criterion9(Run& r) {
  CriterionResult out{9, "negative controls", false, {}};
  const Context& ctx = r.ctx;
  auto rejects = [](const std::function<void()>& f, ErrorKind kind) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind() == kind;
    }
    return false;
  };
  const bool big_a = rejects([&] { make_tmotive(ctx, CMatrix(1, 1, ctx.theta())); }, ErrorKind::domain);
  Sampler s = r.sampler(900);
  FPMatrix bad = s.gamma_s0(1, 0).matrix(ctx.omega);
  bad(0, 1) = bad(0, 1) + FPoly::constant(FFElem::one(ctx.field));
  const bool shape = rejects([&] { alpha(ctx, gamma_from_matrix(ctx, bad, 0)); }, ErrorKind::domain);

  const CMatrix A = s.small_matrix(1, 3 * ctx.ram);
  const IsoSolution sol = solve_iso(ctx, A, s.gamma_s0(1, 1));
  PMatrix corrupt = sol.Phi;
  std::vector<CinfElem> c = corrupt(0, 0).coeffs();
  c[0] = c[0] + ctx.monomial(FFElem::one(ctx.field), 5 * ctx.ram);
  corrupt(0, 0) = PolyT(c);
  const ResidualReport rep = morphism_residual(ctx, A, sol.B, corrupt);
  const bool caught = rep.min_order() < ctx.prec - ctx.slack;
  out.pass = big_a && shape && caught;
  out.detail = {{"large_A_rejected", big_a}, {"bad_shape_rejected", shape}, {"corrupted_phi_residual", rep.min_order()}};
  out.summary = std::string("v = -1 entry rejected: ") + (big_a ? "yes" : "no") + "; off-shape gamma rejected: " + (shape ? "yes" : "no") +
                "; corrupted Phi residual order " + std::to_string(rep.min_order());
  return out;
}

inline std::vector<CriterionResult> run_numeric(Run& r) {
  return {criterion1(r), criterion2(r), criterion3(r), criterion4(r), criterion5(r), criterion6(r), criterion7(r)};
}

/// Bit-exact comparison of `hi` truncated to the precision of each entry of `lo`.
inline CriterionResult compare_fingerprints(const Fingerprint& lo, const Fingerprint& hi, std::int64_t p_lo, std::int64_t p_hi) {
  CriterionResult out{8, "precision soundness", false, {}};
  int same = 0, total = 0;
  json bad = json::array();
  for (const auto& [key, x] : lo) {
    ++total;
    auto it = hi.find(key);
    const bool ok = it != hi.end() && it->second.ram() == x.ram() && it->second.prec() >= x.prec() && it->second.truncate(x.prec()) == x;
    same += ok;
    if (!ok && bad.size() < 20) bad.push_back(key);
  }
  out.pass = total > 0 && same == total && hi.size() == lo.size();
  out.detail = {{"outputs", total}, {"reproduced", same}, {"mismatches", bad}, {"prec_low", p_lo}, {"prec_high", p_hi}};
  out.summary = std::to_string(same) + "/" + std::to_string(total) + " outputs at prec " + std::to_string(p_hi) +
                " reproduce the prec " + std::to_string(p_lo) + " outputs after truncation";
  return out;
}

struct SuiteReport {
  std::vector<CriterionResult> results;
  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
  json to_json(const Config& cfg) const {
    json crit = json::array();
    for (const auto& r : results)
      crit.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"summary", r.summary}, {"detail", r.detail}});
    return {{"config", tmotive::to_json(cfg)}, {"criteria", crit}, {"all_pass", all_pass()}};
  }
};

/// Runs every criterion; `high_prec` is the precision of the criterion 8 re-run.
inline SuiteReport run_suite(const Config& cfg, std::int64_t high_prec = 0) {
  if (high_prec == 0) high_prec = cfg.prec + 100;
  SuiteReport rep;
  auto guarded = [](int id, const std::string& title, const std::function<CriterionResult()>& f) {
    try {
      return f();
    } catch (const Error& e) {
      CriterionResult r{id, title, false, std::string("error: ") + e.what()};
      r.detail["error_kind"] = static_cast<int>(e.kind());
      return r;
    }
  };
  Fingerprint lo, hi;
  Run r(cfg, &lo);
  rep.results.push_back(guarded(1, "Carlitz closed form", [&] { return criterion1(r); }));
  rep.results.push_back(guarded(2, "Carlitz period", [&] { return criterion2(r); }));
  rep.results.push_back(guarded(3, "functional equation", [&] { return criterion3(r); }));
  rep.results.push_back(guarded(4, "first-order slope", [&] { return criterion4(r); }));
  rep.results.push_back(guarded(5, "lattice diagram", [&] { return criterion5(r); }));
  rep.results.push_back(guarded(6, "stabiliser action", [&] { return criterion6(r); }));
  rep.results.push_back(guarded(7, "isomorphism pipeline", [&] { return criterion7(r); }));
  rep.results.push_back(guarded(8, "precision soundness", [&] {
    Config c2 = cfg;
    c2.prec = high_prec;
    Run r2(c2, &hi);
    for (auto* f : {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7}) {
      try {
        f(r2);
      } catch (const Error&) {
      }
    }
    return compare_fingerprints(lo, hi, cfg.prec, high_prec);
  }));
  rep.results.push_back(guarded(9, "negative controls", [&] { return criterion9(r); }));
  return rep;
}

inline std::string format_line(const CriterionResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + " (" + r.title + "): " + r.summary;
}

}  // namespace tmotive::accept
