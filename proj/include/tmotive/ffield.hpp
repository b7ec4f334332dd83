#pragma once

// Arithmetic in a fixed ambient finite field F_{p^D}.
//
// Elements are encoded as integers: the polynomial sum c_i x^i (mod the
// modulus) is stored as sum c_i p^i. Multiplication goes through log/exp
// tables over a primitive element, so the ambient field must stay small
// (desk scale, p^D <= 2^20).

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmotive/error.hpp"

namespace tmotive {

using Code = std::uint32_t;

struct FieldSpec {
  int p = 3;
  int s = 1;  // q = p^s
  int D = 4;  // ambient degree, a multiple of 2s
  std::vector<int> modulus;  // monic, low-to-high, length D + 1

  bool operator==(const FieldSpec&) const = default;
};

namespace detail {

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Dense polynomials over F_p, low-to-high, used only while bootstrapping.
using PolyP = std::vector<int>;

inline void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int inv_mod(int a, int p) {
  int r = 1;
  for (int e = p - 2, b = a % p; e > 0; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return r;
}

inline PolyP poly_rem(PolyP a, const PolyP& m, int p) {
  trim(a);
  const int dm = static_cast<int>(m.size()) - 1;
  const int lead_inv = inv_mod(m.back(), p);
  while (static_cast<int>(a.size()) - 1 >= dm) {
    const int shift = static_cast<int>(a.size()) - 1 - dm;
    const int f = a.back() * lead_inv % p;
    for (int i = 0; i <= dm; ++i) a[shift + i] = ((a[shift + i] - f * m[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

inline PolyP poly_mulmod(const PolyP& a, const PolyP& b, const PolyP& m, int p) {
  if (a.empty() || b.empty()) return {};
  PolyP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_rem(r, m, p);
}

inline PolyP poly_powmod(PolyP a, std::uint64_t e, const PolyP& m, int p) {
  PolyP r{1};
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, a, m, p);
    a = poly_mulmod(a, a, m, p);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// True iff `modulus` (monic, degree D) has no monic factor of degree 1..D/2.
/// Brute-force trial division; fine for D <= 8.
inline bool is_irreducible(const std::vector<int>& modulus, int p) {
  const int D = static_cast<int>(modulus.size()) - 1;
  if (D < 1) return false;
  for (int deg = 1; deg <= D / 2; ++deg) {
    std::uint64_t count = 1;
    for (int i = 0; i < deg; ++i) count *= static_cast<std::uint64_t>(p);
    for (std::uint64_t code = 0; code < count; ++code) {
      detail::PolyP f(deg + 1, 0);
      std::uint64_t c = code;
      for (int i = 0; i < deg; ++i, c /= p) f[i] = static_cast<int>(c % p);
      f[deg] = 1;
      if (detail::poly_rem(modulus, f, p).empty()) return false;
    }
  }
  return true;
}

/// Lexicographically first monic irreducible polynomial of degree D over F_p.
inline std::vector<int> default_modulus(int p, int D) {
  std::uint64_t count = 1;
  for (int i = 0; i < D; ++i) count *= static_cast<std::uint64_t>(p);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<int> f(D + 1, 0);
    std::uint64_t c = code;
    for (int i = 0; i < D; ++i, c /= p) f[i] = static_cast<int>(c % p);
    f[D] = 1;
    if (f[0] != 0 && is_irreducible(f, p)) return f;
  }
  fail(ErrorKind::domain, "no irreducible polynomial found");
}

class FFElem;

/// Immutable ambient field F_{p^D} with q = p^s. Shared by all elements.
class Field : public std::enable_shared_from_this<Field> {
 public:
  static std::shared_ptr<const Field> create(FieldSpec spec) {
    require(detail::is_prime(spec.p), ErrorKind::domain, "p must be prime");
    require(spec.s >= 1 && spec.D >= 1, ErrorKind::domain, "s and D must be positive");
    require(spec.D % (2 * spec.s) == 0, ErrorKind::domain, "D must be a multiple of 2s");
    if (spec.modulus.empty()) spec.modulus = default_modulus(spec.p, spec.D);
    require(static_cast<int>(spec.modulus.size()) == spec.D + 1 && spec.modulus.back() == 1,
            ErrorKind::domain, "modulus must be monic of degree D");
    for (int c : spec.modulus)
      require(c >= 0 && c < spec.p, ErrorKind::domain, "modulus coefficients must lie in [0, p)");
    require(is_irreducible(spec.modulus, spec.p), ErrorKind::domain, "modulus is reducible");
    std::uint64_t size = 1;
    for (int i = 0; i < spec.D; ++i) size *= static_cast<std::uint64_t>(spec.p);
    require(size <= (1u << 20), ErrorKind::domain, "ambient field too large for table arithmetic");
    return std::shared_ptr<const Field>(new Field(std::move(spec), static_cast<Code>(size)));
  }

  static std::shared_ptr<const Field> create(int p, int s, int D = 0) {
    return create(FieldSpec{p, s, D == 0 ? 4 * s : D, {}});
  }

  const FieldSpec& spec() const { return spec_; }
  int p() const { return spec_.p; }
  int s() const { return spec_.s; }
  int degree() const { return spec_.D; }
  std::uint64_t q() const { return q_; }
  Code size() const { return size_; }

  Code add(Code a, Code b) const {
    if (!add_table_.empty()) return add_table_[a * size_ + b];
    Code r = 0;
    for (int i = spec_.D - 1; i >= 0; --i)
      r = r * spec_.p + static_cast<Code>((digit(a, i) + digit(b, i)) % spec_.p);
    return r;
  }
  Code neg(Code a) const { return neg_[a]; }
  Code sub(Code a, Code b) const { return add(a, neg_[b]); }
  Code mul(Code a, Code b) const {
    if (a == 0 || b == 0) return 0;
    Code l = log_[a] + log_[b];
    if (l >= size_ - 1) l -= size_ - 1;
    return exp_[l];
  }
  Code inv(Code a) const {
    require(a != 0, ErrorKind::domain, "division by zero in finite field");
    return exp_[(size_ - 1 - log_[a]) % (size_ - 1)];
  }
  Code div(Code a, Code b) const { return mul(a, inv(b)); }
  Code pow(Code a, std::int64_t e) const {
    if (a == 0) {
      require(e >= 0, ErrorKind::domain, "negative power of zero");
      return e == 0 ? 1 : 0;
    }
    const std::int64_t order = size_ - 1;
    std::int64_t l = (static_cast<std::int64_t>(log_[a]) * (((e % order) + order) % order)) % order;
    return exp_[l];
  }
  /// x^{q^i}; negative i gives the inverse automorphism.
  Code frobenius(Code a, std::int64_t i) const {
    if (a == 0) return 0;
    const std::int64_t order = size_ - 1;
    const std::int64_t cycle = spec_.D / spec_.s;
    std::int64_t k = ((i % cycle) + cycle) % cycle;
    std::int64_t e = 1;
    for (std::int64_t j = 0; j < k; ++j) e = e * static_cast<std::int64_t>(q_) % order;
    return exp_[(static_cast<std::int64_t>(log_[a]) * e) % order];
  }
  Code from_int(std::int64_t n) const { return static_cast<Code>(((n % spec_.p) + spec_.p) % spec_.p); }
  Code primitive() const { return exp_[1]; }
  Code exp_of(std::uint64_t k) const { return exp_[k % (size_ - 1)]; }
  Code log_of(Code a) const {
    require(a != 0, ErrorKind::domain, "log of zero");
    return log_[a];
  }
  bool in_subfield_q(Code a) const { return frobenius(a, 1) == a; }

  int digit(Code a, int i) const { return digits_[static_cast<std::size_t>(a) * spec_.D + i]; }
  std::vector<int> digits(Code a) const {
    return {digits_.begin() + static_cast<std::ptrdiff_t>(a) * spec_.D,
            digits_.begin() + static_cast<std::ptrdiff_t>(a + 1) * spec_.D};
  }
  Code from_digits(std::span<const int> d) const {
    require(static_cast<int>(d.size()) == spec_.D, ErrorKind::domain, "element needs exactly D coefficients");
    Code r = 0;
    for (int i = spec_.D - 1; i >= 0; --i) {
      require(d[i] >= 0 && d[i] < spec_.p, ErrorKind::domain, "coefficient outside [0, p)");
      r = r * spec_.p + static_cast<Code>(d[i]);
    }
    return r;
  }

  /// Some root of sum_j coeffs[j] X^j in the ambient field (smallest code
  /// first), by exhaustive scan.
  std::optional<Code> find_root(std::span<const Code> coeffs) const {
    require(std::any_of(coeffs.begin(), coeffs.end(), [](Code c) { return c != 0; }), ErrorKind::domain,
            "find_root: zero polynomial");
    for (Code x = 0; x < size_; ++x) {
      Code acc = 0;
      for (std::size_t j = coeffs.size(); j-- > 0;) acc = add(mul(acc, x), coeffs[j]);
      if (acc == 0) return x;
    }
    return std::nullopt;
  }

  /// Smallest non-square of F_q and a root omega of X^2 - d with omega not in F_q.
  Code omega() const { return omega_; }
  Code omega_squared() const { return mul(omega_, omega_); }

  /// Elements 1, b, b^2, ..., b^{s-1} spanning F_q over F_p, with b of order q - 1.
  std::vector<Code> subfield_basis() const {
    const Code b = exp_of((size_ - 1) / (q_ - 1));
    std::vector<Code> out{1};
    for (int i = 1; i < spec_.s; ++i) out.push_back(mul(out.back(), b));
    return out;
  }

  /// All elements of F_q (x^q = x), in code order.
  std::vector<Code> subfield_elements() const {
    std::vector<Code> out;
    for (Code x = 0; x < size_; ++x)
      if (in_subfield_q(x)) out.push_back(x);
    return out;
  }

 private:
  Field(FieldSpec spec, Code size) : spec_(std::move(spec)), size_(size) {
    const int p = spec_.p, D = spec_.D;
    q_ = 1;
    for (int i = 0; i < spec_.s; ++i) q_ *= static_cast<std::uint64_t>(p);
    digits_.resize(static_cast<std::size_t>(size_) * D);
    for (Code a = 0; a < size_; ++a) {
      Code c = a;
      for (int i = 0; i < D; ++i, c /= p) digits_[static_cast<std::size_t>(a) * D + i] = static_cast<std::uint8_t>(c % p);
    }
    neg_.resize(size_);
    for (Code a = 0; a < size_; ++a) {
      Code r = 0;
      for (int i = D - 1; i >= 0; --i) r = r * p + static_cast<Code>((p - digit(a, i)) % p);
      neg_[a] = r;
    }
    if (size_ <= 1024) {
      add_table_.resize(static_cast<std::size_t>(size_) * size_);
      for (Code a = 0; a < size_; ++a)
        for (Code b = 0; b < size_; ++b) {
          Code r = 0;
          for (int i = D - 1; i >= 0; --i) r = r * p + static_cast<Code>((digit(a, i) + digit(b, i)) % p);
          add_table_[static_cast<std::size_t>(a) * size_ + b] = r;
        }
    }
    build_log_tables();
    build_omega();
  }

  detail::PolyP to_poly(Code a) const {
    detail::PolyP r = digits(a);
    detail::trim(r);
    return r;
  }
  Code from_poly(const detail::PolyP& a) const {
    std::vector<int> d(spec_.D, 0);
    std::copy(a.begin(), a.end(), d.begin());
    return from_digits(d);
  }

  void build_log_tables() {
    const std::uint64_t order = size_ - 1;
    const auto factors = detail::prime_factors(order);
    Code g = 0;
    for (Code cand = 2; cand < size_ && g == 0; ++cand) {
      const auto poly = to_poly(cand);
      bool primitive = true;
      for (auto f : factors)
        if (detail::poly_powmod(poly, order / f, spec_.modulus, spec_.p) == detail::PolyP{1}) primitive = false;
      if (primitive) g = cand;
    }
    if (size_ == 2) g = 1;
    require(g != 0, ErrorKind::domain, "no primitive element");
    exp_.resize(order);
    log_.assign(size_, 0);
    detail::PolyP cur{1};
    const auto gp = to_poly(g);
    for (std::uint64_t k = 0; k < order; ++k) {
      const Code c = from_poly(cur);
      exp_[k] = c;
      log_[c] = static_cast<Code>(k);
      cur = detail::poly_mulmod(cur, gp, spec_.modulus, spec_.p);
    }
  }

  void build_omega() {
    if (spec_.p == 2) {
      omega_ = 0;  // no omega with omega^2 in F_q exists; rejected by callers
      return;
    }
    Code d = 0;
    for (Code x : subfield_elements()) {
      if (x == 0) continue;
      bool square = false;
      for (Code y : subfield_elements())
        if (mul(y, y) == x) square = true;
      if (!square) {
        d = x;
        break;
      }
    }
    const Code poly[3] = {neg(d), 0, 1};
    const auto r = find_root(poly);
    require(r.has_value(), ErrorKind::singular, "X^2 - d has no root; increase D");
    omega_ = *r;
  }

  FieldSpec spec_;
  Code size_;
  std::uint64_t q_ = 0;
  std::vector<std::uint8_t> digits_;
  std::vector<Code> neg_;
  std::vector<Code> add_table_;
  std::vector<Code> exp_;
  std::vector<Code> log_;
  Code omega_ = 0;
};

using FieldPtr = std::shared_ptr<const Field>;

/// A field element carrying a reference to its field.
class FFElem {
 public:
  FFElem() = default;
  FFElem(FieldPtr f, Code c) : field_(std::move(f)), code_(c) {}

  static FFElem zero(FieldPtr f) { return {std::move(f), 0}; }
  static FFElem one(FieldPtr f) { return {std::move(f), 1}; }
  static FFElem from_int(FieldPtr f, std::int64_t n) {
    const Code c = f->from_int(n);
    return {std::move(f), c};
  }
  static FFElem from_digits(FieldPtr f, std::span<const int> d) {
    const Code c = f->from_digits(d);
    return {std::move(f), c};
  }

  const FieldPtr& field() const { return field_; }
  Code code() const { return code_; }
  bool is_zero() const { return code_ == 0; }
  std::vector<int> coeffs() const { return field_->digits(code_); }

  friend FFElem operator+(const FFElem& x, const FFElem& y) { return {same(x, y), x.field_->add(x.code_, y.code_)}; }
  friend FFElem operator-(const FFElem& x, const FFElem& y) { return {same(x, y), x.field_->sub(x.code_, y.code_)}; }
  friend FFElem operator*(const FFElem& x, const FFElem& y) { return {same(x, y), x.field_->mul(x.code_, y.code_)}; }
  friend FFElem operator/(const FFElem& x, const FFElem& y) { return {same(x, y), x.field_->div(x.code_, y.code_)}; }
  FFElem operator-() const { return {field_, field_->neg(code_)}; }
  FFElem inverse() const { return {field_, field_->inv(code_)}; }
  FFElem pow(std::int64_t e) const { return {field_, field_->pow(code_, e)}; }

  friend bool operator==(const FFElem& x, const FFElem& y) {
    return x.code_ == y.code_ && (x.field_ == y.field_ || x.field_->spec() == y.field_->spec());
  }

 private:
  static const FieldPtr& same(const FFElem& x, const FFElem& y) {
    require(x.field_ && y.field_, ErrorKind::domain, "uninitialised field element");
    require(x.field_ == y.field_ || x.field_->spec() == y.field_->spec(), ErrorKind::domain,
            "field elements from different fields");
    return x.field_;
  }

  FieldPtr field_;
  Code code_ = 0;
};

/// x^{q^i}.
inline FFElem frobenius(const FFElem& x, std::int64_t i) { return {x.field(), x.field()->frobenius(x.code(), i)}; }

/// Some root of sum_j poly[j] X^j in the ambient field, or nullopt.
inline std::optional<FFElem> find_root_in_field(std::span<const FFElem> poly) {
  require(!poly.empty(), ErrorKind::domain, "find_root_in_field: empty polynomial");
  std::vector<Code> c;
  c.reserve(poly.size());
  for (const auto& x : poly) c.push_back(x.code());
  auto r = poly.front().field()->find_root(c);
  if (!r) return std::nullopt;
  return FFElem(poly.front().field(), *r);
}

/// The fixed omega in F_{q^2} \ F_q with omega^2 in F_q.
struct Omega {
  FFElem value;

  static Omega of(const FieldPtr& f) {
    require(f->p() % 2 == 1, ErrorKind::domain, "q must be odd (omega^2 in F_q forces odd characteristic)");
    Omega w{FFElem(f, f->omega())};
    const FFElem sq = w.value * w.value;
    require(frobenius(w.value, 1) != w.value, ErrorKind::domain, "omega lies in F_q");
    require(frobenius(sq, 1) == sq, ErrorKind::domain, "omega^2 not in F_q");
    return w;
  }
};

}  // namespace tmotive
