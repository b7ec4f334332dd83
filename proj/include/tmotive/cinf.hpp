#pragma once

// Truncated Puiseux series in t = 1/theta over the ambient finite field.
//
// An element is sum_e c_e t^{e/N} known modulo t^{P/N}: `ram` is N, `prec`
// is P and every stored exponent numerator e satisfies e < P. Precision is
// absolute and every operation states how it propagates.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "tmotive/error.hpp"
#include "tmotive/ffield.hpp"

namespace tmotive {

/// Exact rational valuation, reported as num/den in lowest terms.
struct Valuation {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Valuation of(std::int64_t e, std::int64_t ram) {
    const std::int64_t g = std::gcd(e, ram);
    return {e / g, ram / g};
  }
  bool operator==(const Valuation&) const = default;
  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  require(!__builtin_mul_overflow(a, b, &r), ErrorKind::precision, "exponent overflow");
  return r;
}

inline std::int64_t ipow(std::int64_t b, std::int64_t e) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < e; ++i) r = checked_mul(r, b);
  return r;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

}  // namespace detail

/// Precision marker for exact constants (never truncated by twisting or lifting).
inline constexpr std::int64_t kExactPrec = std::numeric_limits<std::int64_t>::max() / 16;

class CinfElem {
 public:
  using Term = std::pair<std::int64_t, Code>;

  CinfElem() = default;

  static CinfElem zero(FieldPtr f, std::int64_t ram, std::int64_t prec) {
    require(ram >= 1, ErrorKind::domain, "ramification must be positive");
    CinfElem x;
    x.field_ = std::move(f);
    x.ram_ = ram;
    x.prec_ = prec;
    return x;
  }
  /// c * t^{e/N}.
  static CinfElem monomial(const FFElem& c, std::int64_t e, std::int64_t ram, std::int64_t prec) {
    CinfElem x = zero(c.field(), ram, prec);
    if (!c.is_zero() && e < prec) x.terms_.push_back({e, c.code()});
    return x;
  }
  static CinfElem constant(const FFElem& c, std::int64_t ram, std::int64_t prec) { return monomial(c, 0, ram, prec); }
  static CinfElem one(FieldPtr f, std::int64_t ram, std::int64_t prec) {
    return constant(FFElem::one(std::move(f)), ram, prec);
  }
  /// theta = t^{-1}.
  static CinfElem theta(FieldPtr f, std::int64_t ram, std::int64_t prec) {
    return monomial(FFElem::one(std::move(f)), -ram, ram, prec);
  }
  /// Builds from raw terms; drops zero coefficients and terms at or above prec.
  static CinfElem from_terms(FieldPtr f, std::int64_t ram, std::int64_t prec, std::vector<Term> terms) {
    CinfElem x = zero(std::move(f), ram, prec);
    std::sort(terms.begin(), terms.end());
    for (std::size_t i = 0; i < terms.size();) {
      Code c = 0;
      const std::int64_t e = terms[i].first;
      for (; i < terms.size() && terms[i].first == e; ++i) c = x.field_->add(c, terms[i].second);
      if (c != 0 && e < prec) x.terms_.push_back({e, c});
    }
    return x;
  }

  const FieldPtr& field() const { return field_; }
  std::int64_t ram() const { return ram_; }
  std::int64_t prec() const { return prec_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// True when no term survives below the precision.
  bool is_zero() const { return terms_.empty(); }
  /// Lowest stored exponent numerator, or prec for a zero-to-precision element
  /// (a lower bound on the valuation in exponent units).
  std::int64_t order() const { return terms_.empty() ? prec_ : terms_.front().first; }
  Valuation valuation() const {
    require(!terms_.empty(), ErrorKind::precision, "valuation of an element that is zero to precision");
    return Valuation::of(terms_.front().first, ram_);
  }
  FFElem leading_coeff() const {
    require(!terms_.empty(), ErrorKind::precision, "leading coefficient of zero");
    return {field_, terms_.front().second};
  }
  FFElem coeff(std::int64_t e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{e, 0});
    return {field_, (it != terms_.end() && it->first == e) ? it->second : 0};
  }

  /// Same element written with ramification new_ram (a multiple of ram).
  CinfElem lift(std::int64_t new_ram) const {
    require(new_ram % ram_ == 0, ErrorKind::domain, "ramification lift must be a multiple");
    if (new_ram == ram_) return *this;
    const std::int64_t f = new_ram / ram_;
    CinfElem x = zero(field_, new_ram, prec_ >= kExactPrec ? prec_ : detail::checked_mul(prec_, f));
    x.terms_.reserve(terms_.size());
    for (auto [e, c] : terms_) x.terms_.push_back({e * f, c});
    return x;
  }

  /// Drops everything at or above new_prec (never raises precision).
  CinfElem truncate(std::int64_t new_prec) const {
    CinfElem x = *this;
    x.prec_ = std::min(prec_, new_prec);
    while (!x.terms_.empty() && x.terms_.back().first >= x.prec_) x.terms_.pop_back();
    return x;
  }

  /// Bit-exact equality: same ram, prec and terms.
  friend bool operator==(const CinfElem& a, const CinfElem& b) {
    return a.ram_ == b.ram_ && a.prec_ == b.prec_ && a.terms_ == b.terms_;
  }
  /// Equality modulo the smaller of the two precisions (after lifting).
  bool agrees_with(const CinfElem& o) const {
    const std::int64_t r = std::lcm(ram_, o.ram_);
    const CinfElem a = lift(r), b = o.lift(r);
    const std::int64_t p = std::min(a.prec_, b.prec_);
    return a.truncate(p).terms_ == b.truncate(p).terms_;
  }

  friend CinfElem operator+(const CinfElem& x, const CinfElem& y) { return add_impl(x, y, false); }
  friend CinfElem operator-(const CinfElem& x, const CinfElem& y) { return add_impl(x, y, true); }
  CinfElem operator-() const {
    CinfElem x = *this;
    for (auto& t : x.terms_) t.second = field_->neg(t.second);
    return x;
  }

  /// Product; prec = min(P_x + v(y) N, P_y + v(x) N) with v of a zero element
  /// taken as its precision.
  friend CinfElem operator*(const CinfElem& x0, const CinfElem& y0) {
    check_field(x0, y0);
    const std::int64_t r = std::lcm(x0.ram_, y0.ram_);
    const CinfElem& x = x0.ram_ == r ? x0 : x0.lift(r);
    const CinfElem& y = y0.ram_ == r ? y0 : y0.lift(r);
    const std::int64_t vx = x.order(), vy = y.order();
    const std::int64_t prec = std::min(x.prec_ + vy, y.prec_ + vx);
    CinfElem out = zero(x.field_, r, prec);
    if (x.terms_.empty() || y.terms_.empty()) return out;
    const std::int64_t lo = vx + vy;
    if (prec <= lo) return out;
    const auto& F = *x.field_;
    const std::int64_t span = prec - lo;
    if (span <= (std::int64_t{1} << 22)) {
      std::vector<Code> acc(static_cast<std::size_t>(span), 0);
      for (auto [ex, cx] : x.terms_) {
        const std::int64_t limit = prec - ex;
        for (auto [ey, cy] : y.terms_) {
          if (ey >= limit) break;
          auto& a = acc[static_cast<std::size_t>(ex + ey - lo)];
          a = F.add(a, F.mul(cx, cy));
        }
      }
      for (std::int64_t k = 0; k < span; ++k)
        if (acc[static_cast<std::size_t>(k)] != 0) out.terms_.push_back({lo + k, acc[static_cast<std::size_t>(k)]});
    } else {
      std::map<std::int64_t, Code> acc;
      for (auto [ex, cx] : x.terms_) {
        const std::int64_t limit = prec - ex;
        for (auto [ey, cy] : y.terms_) {
          if (ey >= limit) break;
          auto& a = acc[ex + ey];
          a = F.add(a, F.mul(cx, cy));
        }
      }
      for (auto [e, c] : acc)
        if (c != 0) out.terms_.push_back({e, c});
    }
    return out;
  }

  /// Scalar multiple by a field element (precision unchanged).
  CinfElem scaled(const FFElem& c) const {
    if (c.is_zero()) return zero(field_, ram_, prec_);
    CinfElem x = *this;
    for (auto& t : x.terms_) t.second = field_->mul(t.second, c.code());
    return x;
  }
  /// Multiplication by t^{k/N}; precision shifts by k.
  CinfElem shifted(std::int64_t k) const {
    CinfElem x = *this;
    x.prec_ += k;
    for (auto& t : x.terms_) t.first += k;
    return x;
  }

  /// Multiplicative inverse: factor c t^e out and expand (1 + u)^{-1} as a
  /// geometric series. prec = P - 2 v(x) N.
  CinfElem inverse() const {
    require(!terms_.empty(), ErrorKind::precision, "inverse of an element that is zero to precision");
    const std::int64_t e = terms_.front().first;
    const Code c_inv = field_->inv(terms_.front().second);
    const std::int64_t rel = prec_ - e;  // relative precision of 1 + u
    const std::int64_t out_prec = prec_ - 2 * e;
    // u_k for k >= 1: coefficients of x / (c t^e) - 1.
    std::vector<Term> u;
    for (std::size_t i = 1; i < terms_.size(); ++i) u.push_back({terms_[i].first - e, field_->mul(terms_[i].second, c_inv)});
    CinfElem out = zero(field_, ram_, out_prec);
    if (rel <= 0) return out;
    const auto& F = *field_;
    std::vector<Code> w(static_cast<std::size_t>(rel), 0);
    w[0] = 1;
    for (std::int64_t k = 1; k < rel; ++k) {
      Code acc = 0;
      for (auto [j, uj] : u) {
        if (j > k) break;
        const Code wk = w[static_cast<std::size_t>(k - j)];
        if (wk != 0) acc = F.add(acc, F.mul(uj, wk));
      }
      w[static_cast<std::size_t>(k)] = F.neg(acc);
    }
    for (std::int64_t k = 0; k < rel; ++k)
      if (w[static_cast<std::size_t>(k)] != 0) out.terms_.push_back({k - e, F.mul(w[static_cast<std::size_t>(k)], c_inv)});
    return out;
  }

  friend CinfElem operator/(const CinfElem& x, const CinfElem& y) { return x * y.inverse(); }

  /// x^{q^i}, exact in characteristic p: c t^{e/N} -> c^{q^i} t^{e q^i / N}.
  /// Precision multiplies by q^i (divides, rounding up, for i < 0).
  CinfElem twist(std::int64_t i) const {
    if (i == 0) return *this;
    const auto q = static_cast<std::int64_t>(field_->q());
    const std::int64_t qi = detail::ipow(q, i < 0 ? -i : i);
    CinfElem x = zero(field_, ram_, 0);
    x.terms_.reserve(terms_.size());
    if (i > 0) {
      x.prec_ = prec_ >= kExactPrec ? prec_ : detail::checked_mul(prec_, qi);
      for (auto [e, c] : terms_) x.terms_.push_back({detail::checked_mul(e, qi), field_->frobenius(c, i)});
    } else {
      for (auto [e, c] : terms_) {
        require(e % qi == 0, ErrorKind::domain, "inverse twist needs exponents divisible by q^|i|");
        x.terms_.push_back({e / qi, field_->frobenius(c, i)});
      }
      x.prec_ = prec_ >= kExactPrec ? prec_ : detail::ceil_div(prec_, qi);
    }
    return x;
  }

  /// x^k for k >= 0 by repeated squaring.
  CinfElem pow(std::int64_t k) const {
    require(k >= 0, ErrorKind::domain, "negative power");
    if (k == 0) return one(field_, ram_, prec_ - order());
    CinfElem r, b = *this;
    bool first = true;
    while (k > 0) {
      if (k & 1) {
        r = first ? b : r * b;
        first = false;
      }
      k >>= 1;
      if (k > 0) b = b * b;
    }
    return r;
  }

  /// Some y with y^m = x (m prime to p), using the smallest-code field root of
  /// the leading coefficient and Newton iteration on the unit part. The
  /// ramification is raised when m does not divide the leading exponent.
  CinfElem root(std::int64_t m) const {
    require(m >= 1, ErrorKind::domain, "root degree must be positive");
    require(m % field_->p() != 0, ErrorKind::domain, "root degree divisible by p");
    require(!terms_.empty(), ErrorKind::precision, "root of an element that is zero to precision");
    if (m == 1) return *this;
    CinfElem x = *this;
    const std::int64_t e0 = x.terms_.front().first;
    const std::int64_t g = std::gcd(e0 < 0 ? -e0 : e0, m);
    if (g != m) x = x.lift(ram_ * (m / g));
    const std::int64_t e = x.terms_.front().first;
    const FFElem lead = x.leading_coeff();
    std::vector<FFElem> poly(static_cast<std::size_t>(m + 1), FFElem::zero(field_));
    poly[0] = -lead;
    poly.back() = FFElem::one(field_);
    const auto r = find_root_in_field(poly);
    require(r.has_value(), ErrorKind::singular, "leading coefficient has no m-th root in the ambient field; raise D");
    // s = x / (lead t^e) has valuation 0 and relative precision P - e.
    const CinfElem s = x.shifted(-e).scaled(lead.inverse());
    CinfElem w = one(field_, x.ram_, s.prec_);
    const FFElem m_inv = FFElem::from_int(field_, m).inverse();
    for (int iter = 0; iter < 64; ++iter) {
      const CinfElem f = w.pow(m) - s;
      if (f.is_zero()) break;
      const CinfElem step = (f * w.pow(m - 1).inverse()).scaled(m_inv);
      w = (w - step).truncate(s.prec_);
    }
    return w.scaled(*r).shifted(e / m);
  }

 private:
  static void check_field(const CinfElem& x, const CinfElem& y) {
    require(x.field_ && y.field_, ErrorKind::domain, "uninitialised series");
    require(x.field_ == y.field_ || x.field_->spec() == y.field_->spec(), ErrorKind::domain,
            "series over different fields");
  }

  static CinfElem add_impl(const CinfElem& x0, const CinfElem& y0, bool negate) {
    check_field(x0, y0);
    const std::int64_t r = std::lcm(x0.ram_, y0.ram_);
    const CinfElem& x = x0.ram_ == r ? x0 : x0.lift(r);
    const CinfElem& y = y0.ram_ == r ? y0 : y0.lift(r);
    const auto& F = *x.field_;
    CinfElem out = zero(x.field_, r, std::min(x.prec_, y.prec_));
    auto i = x.terms_.begin(), j = y.terms_.begin();
    out.terms_.reserve(x.terms_.size() + y.terms_.size());
    while (i != x.terms_.end() || j != y.terms_.end()) {
      std::int64_t e;
      Code c;
      if (j == y.terms_.end() || (i != x.terms_.end() && i->first < j->first)) {
        e = i->first, c = i->second, ++i;
      } else if (i == x.terms_.end() || j->first < i->first) {
        e = j->first, c = negate ? F.neg(j->second) : j->second, ++j;
      } else {
        e = i->first, c = negate ? F.sub(i->second, j->second) : F.add(i->second, j->second), ++i, ++j;
      }
      if (e >= out.prec_) break;
      if (c != 0) out.terms_.push_back({e, c});
    }
    return out;
  }

  FieldPtr field_;
  std::int64_t ram_ = 1;
  std::int64_t prec_ = 0;
  std::vector<Term> terms_;
};

/// theta_{ij} = theta^{q^i} - theta^{q^j}.
inline CinfElem theta_ij(const FieldPtr& f, std::int64_t ram, std::int64_t prec, std::int64_t i, std::int64_t j) {
  const CinfElem th = CinfElem::theta(f, ram, prec);
  return th.twist(i) - th.twist(j);
}

}  // namespace tmotive
