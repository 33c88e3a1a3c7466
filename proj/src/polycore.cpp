#include "kalman/polycore.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "kalman/errors.hpp"

namespace kalman {

std::uint64_t ExponentVec::total_degree() const {
  return std::accumulate(e_.begin(), e_.end(), std::uint64_t{0});
}

bool ExponentVec::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](value_type v) { return v == 0; });
}

Ring::Ring(std::vector<std::string> names) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw ValidationError("ring variable names must be non-empty");
    if (!seen.insert(n).second) throw ValidationError("duplicate ring variable '" + n + "'");
  }
  names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
}

std::optional<std::size_t> Ring::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_->size(); ++i)
    if ((*names_)[i] == name) return i;
  return std::nullopt;
}

bool Caps::any_bounded() const {
  return std::any_of(c_.begin(), c_.end(), [](std::uint32_t c) { return c != kUnbounded; });
}

bool Caps::all_bounded() const {
  return std::all_of(c_.begin(), c_.end(), [](std::uint32_t c) { return c != kUnbounded; });
}

bool Caps::admits(const ExponentVec& e) const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (e[i] > c_[i]) return false;
  return true;
}

Caps Caps::meet(const Caps& other) const {
  Caps out(*this);
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = std::min(c_[i], other.c_[i]);
  return out;
}

// ---------------------------------------------------------------------------

TPoly::TPoly(Ring ring) : ring_(std::move(ring)), caps_(Caps::none(ring_.size())) {}

TPoly::TPoly(Ring ring, Caps caps) : ring_(std::move(ring)), caps_(std::move(caps)) {
  if (caps_.size() != ring_.size()) throw ValidationError("caps length does not match ring");
}

TPoly::TPoly(Ring ring, Caps caps, TermMap terms) : TPoly(std::move(ring), std::move(caps)) {
  for (auto& [e, c] : terms) {
    if (e.size() != ring_.size()) throw ValidationError("exponent length does not match ring");
    if (c != 0 && caps_.admits(e)) terms_.emplace(e, std::move(c));
  }
}

TPoly TPoly::constant(const Ring& ring, const BigInt& c) {
  return monomial(ring, ExponentVec(ring.size()), c);
}

TPoly TPoly::variable(const Ring& ring, std::size_t index) {
  if (index >= ring.size()) throw ValidationError("variable index out of range");
  ExponentVec e(ring.size());
  e[index] = 1;
  return monomial(ring, std::move(e));
}

TPoly TPoly::variable(const Ring& ring, std::string_view name) {
  auto i = ring.index_of(name);
  if (!i) throw ValidationError("unknown variable '" + std::string(name) + "'");
  return variable(ring, *i);
}

TPoly TPoly::monomial(const Ring& ring, ExponentVec e, const BigInt& c) {
  if (e.size() != ring.size()) throw ValidationError("exponent length does not match ring");
  TPoly p(ring);
  if (c != 0) p.terms_.emplace(std::move(e), c);
  return p;
}

BigInt TPoly::coefficient(const ExponentVec& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? BigInt(0) : it->second;
}

BigInt TPoly::constant_term() const { return coefficient(ExponentVec(ring_.size())); }

std::uint64_t TPoly::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.total_degree());
  return d;
}

std::uint32_t TPoly::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

TPoly TPoly::truncated(const Caps& caps) const {
  if (caps.size() != ring_.size()) throw ValidationError("caps length does not match ring");
  TPoly out(ring_, caps);
  for (const auto& [e, c] : terms_)
    if (caps.admits(e)) out.terms_.emplace_hint(out.terms_.end(), e, c);
  return out;
}

TPoly TPoly::coefficient_in(std::size_t var, std::uint32_t power) const {
  if (var >= ring_.size()) throw ValidationError("variable index out of range");
  TPoly out(ring_, caps_);
  for (const auto& [e, c] : terms_) {
    if (e[var] != power) continue;
    ExponentVec f = e;
    f[var] = 0;
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

TPoly TPoly::derivative(std::size_t var) const {
  if (var >= ring_.size()) throw ValidationError("variable index out of range");
  TPoly out(ring_, caps_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    ExponentVec f = e;
    f[var] -= 1;
    out.terms_.emplace(std::move(f), c * e[var]);
  }
  return out;
}

BigRational TPoly::evaluate(std::span<const BigRational> point) const {
  if (point.size() != ring_.size()) throw ValidationError("evaluation point has wrong length");
  BigRational sum = 0;
  for (const auto& [e, c] : terms_) {
    BigRational term(c);
    for (std::size_t v = 0; v < e.size(); ++v)
      for (std::uint32_t j = 0; j < e[v]; ++j) term *= point[v];
    sum += term;
  }
  return sum;
}

void TPoly::check_same_ring(const TPoly& o) const {
  if (!(ring_ == o.ring_)) throw ValidationError("polynomials belong to different rings");
}

void TPoly::add_scaled(const TPoly& o, int sign) {
  check_same_ring(o);
  for (const auto& [e, c] : o.terms_) {
    if (!caps_.admits(e)) continue;
    auto [it, inserted] = terms_.try_emplace(e, 0);
    if (sign > 0)
      it->second += c;
    else
      it->second -= c;
    if (it->second == 0) terms_.erase(it);
  }
}

TPoly TPoly::operator-() const {
  TPoly out(*this);
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

TPoly& TPoly::operator+=(const TPoly& o) {
  add_scaled(o, +1);
  return *this;
}

TPoly& TPoly::operator-=(const TPoly& o) {
  add_scaled(o, -1);
  return *this;
}

TPoly& TPoly::operator*=(const TPoly& o) {
  check_same_ring(o);
  *this = poly_mul(*this, o, caps_.meet(o.caps_));
  return *this;
}

TPoly& TPoly::operator*=(const BigInt& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

// ---------------------------------------------------------------------------

namespace {

struct Term {
  const ExponentVec* exps;
  const BigInt* coeff;
  std::uint64_t key;
};

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 22;

}  // namespace

TPoly poly_mul(const TPoly& a, const TPoly& b, const Caps& caps) {
  if (!(a.ring() == b.ring())) throw ValidationError("polynomials belong to different rings");
  const std::size_t nv = a.ring().size();
  if (caps.size() != nv) throw ValidationError("caps length does not match ring");

  TPoly out(a.ring(), caps);
  if (a.is_zero() || b.is_zero()) return out;

  std::vector<std::uint32_t> max_a(nv, 0), max_b(nv, 0);
  std::vector<const std::pair<const ExponentVec, BigInt>*> ta, tb;
  for (const auto& t : a.terms())
    if (caps.admits(t.first)) {
      ta.push_back(&t);
      for (std::size_t v = 0; v < nv; ++v) max_a[v] = std::max(max_a[v], t.first[v]);
    }
  for (const auto& t : b.terms())
    if (caps.admits(t.first)) {
      tb.push_back(&t);
      for (std::size_t v = 0; v < nv; ++v) max_b[v] = std::max(max_b[v], t.first[v]);
    }
  if (ta.empty() || tb.empty()) return out;

  // Mixed-radix packing of exponents within the reachable box.
  std::vector<std::uint32_t> hi(nv);
  std::vector<std::uint64_t> stride(nv);
  bool need_check = false;
  bool packable = true;
  unsigned __int128 box = 1;
  for (std::size_t v = 0; v < nv; ++v) {
    const std::uint64_t reach = std::uint64_t{max_a[v]} + max_b[v];
    hi[v] = static_cast<std::uint32_t>(std::min<std::uint64_t>(reach, caps[v]));
    if (hi[v] < reach) need_check = true;
    stride[v] = static_cast<std::uint64_t>(box);
    box *= static_cast<unsigned __int128>(hi[v]) + 1;
    if (box > (static_cast<unsigned __int128>(1) << 62)) packable = false;
  }

  auto fits = [&](const ExponentVec& x, const ExponentVec& y) {
    if (!need_check) return true;
    for (std::size_t v = 0; v < nv; ++v)
      if (x[v] + y[v] > hi[v]) return false;
    return true;
  };

  auto& terms = out.terms_;
  if (!packable) {
    TPoly::TermMap acc;
    for (auto* x : ta)
      for (auto* y : tb) {
        if (!fits(x->first, y->first)) continue;
        std::vector<std::uint32_t> e(nv);
        for (std::size_t v = 0; v < nv; ++v) e[v] = x->first[v] + y->first[v];
        acc[ExponentVec(std::move(e))] += x->second * y->second;
      }
    for (auto& [e, c] : acc)
      if (c != 0) terms.emplace_hint(terms.end(), e, std::move(c));
    return out;
  }

  auto pack = [&](const ExponentVec& e) {
    std::uint64_t k = 0;
    for (std::size_t v = 0; v < nv; ++v) k += e[v] * stride[v];
    return k;
  };
  std::vector<Term> pa, pb;
  pa.reserve(ta.size());
  pb.reserve(tb.size());
  for (auto* x : ta) pa.push_back({&x->first, &x->second, pack(x->first)});
  for (auto* y : tb) pb.push_back({&y->first, &y->second, pack(y->first)});

  auto unpack = [&](std::uint64_t k) {
    std::vector<std::uint32_t> e(nv);
    for (std::size_t v = 0; v < nv; ++v) {
      e[v] = static_cast<std::uint32_t>(k % (std::uint64_t{hi[v]} + 1));
      k /= std::uint64_t{hi[v]} + 1;
    }
    return ExponentVec(std::move(e));
  };

  const auto nbox = static_cast<std::uint64_t>(box);
  const std::uint64_t pairs = static_cast<std::uint64_t>(pa.size()) * pb.size();
  if (nbox <= kDenseLimit && nbox <= std::max<std::uint64_t>(4 * pairs, 1 << 12)) {
    std::vector<BigInt> dense(nbox);
    std::vector<std::uint64_t> touched;
    std::vector<char> seen(nbox, 0);
    for (const auto& x : pa)
      for (const auto& y : pb) {
        if (!fits(*x.exps, *y.exps)) continue;
        const std::uint64_t k = x.key + y.key;
        dense[k] += (*x.coeff) * (*y.coeff);
        if (!seen[k]) {
          seen[k] = 1;
          touched.push_back(k);
        }
      }
    std::vector<std::pair<ExponentVec, BigInt>> collected;
    collected.reserve(touched.size());
    for (auto k : touched)
      if (dense[k] != 0) collected.emplace_back(unpack(k), std::move(dense[k]));
    std::sort(collected.begin(), collected.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    for (auto& [e, c] : collected) terms.emplace_hint(terms.end(), std::move(e), std::move(c));
    return out;
  }

  std::unordered_map<std::uint64_t, BigInt> acc;
  acc.reserve(std::min<std::uint64_t>(pairs, nbox));
  for (const auto& x : pa)
    for (const auto& y : pb) {
      if (!fits(*x.exps, *y.exps)) continue;
      acc[x.key + y.key] += (*x.coeff) * (*y.coeff);
    }
  std::vector<std::pair<ExponentVec, BigInt>> collected;
  collected.reserve(acc.size());
  for (auto& [k, c] : acc)
    if (c != 0) collected.emplace_back(unpack(k), std::move(c));
  std::sort(collected.begin(), collected.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  for (auto& [e, c] : collected) terms.emplace_hint(terms.end(), std::move(e), std::move(c));
  return out;
}

TPoly poly_pow(const TPoly& a, unsigned e, const Caps& caps) {
  TPoly result = TPoly::constant(a.ring(), 1).truncated(caps);
  TPoly base = a.truncated(caps);
  while (e > 0) {
    if (e & 1u) result = poly_mul(result, base, caps);
    e >>= 1;
    if (e > 0) base = poly_mul(base, base, caps);
  }
  return result;
}

BigInt coefficient_of(const TPoly& p, const ExponentVec& m) {
  if (m.size() != p.ring().size()) throw ValidationError("monomial length does not match ring");
  return p.coefficient(m);
}

BigInt coefficient_of_product(const TPoly& a, const TPoly& b, const ExponentVec& m) {
  if (!(a.ring() == b.ring())) throw ValidationError("polynomials belong to different rings");
  if (m.size() != a.ring().size()) throw ValidationError("monomial length does not match ring");
  const TPoly& small = a.size() <= b.size() ? a : b;
  const TPoly& large = a.size() <= b.size() ? b : a;
  BigInt sum = 0;
  std::vector<std::uint32_t> rest(m.size());
  for (const auto& [e, c] : small.terms()) {
    bool inside = true;
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (e[v] > m[v]) {
        inside = false;
        break;
      }
      rest[v] = m[v] - e[v];
    }
    if (!inside) continue;
    auto it = large.terms().find(ExponentVec(rest));
    if (it != large.terms().end()) sum += c * it->second;
  }
  return sum;
}

TPoly elementary_symmetric(const Ring& ring, std::span<const std::size_t> vars, std::size_t i) {
  if (i > vars.size())
    throw ValidationError("elementary symmetric index " + std::to_string(i) +
                          " exceeds variable count " + std::to_string(vars.size()));
  for (auto v : vars)
    if (v >= ring.size()) throw ValidationError("variable index out of range");
  TPoly out(ring);
  // Walk all i-subsets in lexicographic order.
  std::vector<std::size_t> pick(i);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  while (true) {
    ExponentVec e(ring.size());
    for (auto p : pick) e[vars[p]] += 1;
    out += TPoly::monomial(ring, std::move(e));
    std::size_t j = i;
    while (j > 0 && pick[j - 1] == vars.size() - i + j - 1) --j;
    if (j == 0) break;
    ++pick[j - 1];
    for (std::size_t l = j; l < i; ++l) pick[l] = pick[l - 1] + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(const TPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const bool neg = c < 0;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    const BigInt mag = neg ? BigInt(-c) : c;
    bool wrote = false;
    if (mag != 1 || e.is_zero()) {
      os << mag;
      wrote = true;
    }
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      if (wrote) os << '*';
      os << p.ring().name(v);
      if (e[v] > 1) os << '^' << e[v];
      wrote = true;
    }
  }
  return os.str();
}

namespace {

class PolyParser {
 public:
  PolyParser(const Ring& ring, std::string_view s) : ring_(ring), s_(s) {}

  TPoly parse() {
    TPoly out(ring_);
    skip();
    if (s_ == "0") return out;
    bool first = true;
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      out += term(sign);
    }
    if (first) fail("empty polynomial");
    return out;
  }

 private:
  TPoly term(int sign) {
    BigInt coeff = 1;
    ExponentVec e(ring_.size());
    bool have_factor = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff = BigInt(digits());
      have_factor = true;
    }
    while (true) {
      skip();
      if (have_factor) {
        if (peek() != '*') break;
        ++pos_;
        skip();
      }
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      if (start == pos_) fail("expected variable name");
      auto idx = ring_.index_of(s_.substr(start, pos_ - start));
      if (!idx) fail("unknown variable '" + std::string(s_.substr(start, pos_ - start)) + "'");
      std::uint32_t power = 1;
      if (peek() == '^') {
        ++pos_;
        power = static_cast<std::uint32_t>(std::stoul(digits()));
      }
      e[*idx] += power;
      have_factor = true;
    }
    return TPoly::monomial(ring_, std::move(e), sign < 0 ? BigInt(-coeff) : coeff);
  }

  std::string digits() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  const Ring& ring_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

TPoly parse_poly(const Ring& ring, std::string_view text) { return PolyParser(ring, text).parse(); }

// ---------------------------------------------------------------------------

PolyMatrix::PolyMatrix(const Ring& ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), entries_(rows * cols, TPoly(ring)) {}

PolyMatrix PolyMatrix::identity(const Ring& ring, std::size_t n) {
  PolyMatrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, TPoly::constant(ring, 1));
  return m;
}

void PolyMatrix::set(std::size_t r, std::size_t c, TPoly value) {
  if (r >= rows_ || c >= cols_) throw ValidationError("matrix index out of range");
  if (!(value.ring() == ring_)) throw ValidationError("matrix entry belongs to a different ring");
  entries_[r * cols_ + c] = std::move(value);
}

PolyMatrix PolyMatrix::minor(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw ValidationError("matrix index out of range");
  PolyMatrix out(ring_, rows_ - 1, cols_ - 1);
  for (std::size_t i = 0, oi = 0; i < rows_; ++i) {
    if (i == r) continue;
    for (std::size_t j = 0, oj = 0; j < cols_; ++j) {
      if (j == c) continue;
      out.entries_[oi * out.cols_ + oj] = at(i, j);
      ++oj;
    }
    ++oi;
  }
  return out;
}

TPoly det(const PolyMatrix& m) {
  if (m.rows() != m.cols())
    throw ValidationError("determinant of non-square " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " matrix");
  const std::size_t n = m.rows();
  if (n > 20) throw ValidationError("determinant dimension exceeds 20");
  if (n == 0) return TPoly::constant(m.ring(), 1);

  // memo[mask] = det of rows (n - popcount(mask))..n-1 restricted to columns in mask.
  std::unordered_map<std::uint32_t, TPoly> memo;
  std::function<const TPoly&(std::uint32_t)> solve = [&](std::uint32_t mask) -> const TPoly& {
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    const std::size_t row = n - static_cast<std::size_t>(std::popcount(mask));
    TPoly acc(m.ring());
    if (mask == 0) {
      acc = TPoly::constant(m.ring(), 1);
    } else {
      int position = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (!(mask & (1u << c))) continue;
        const TPoly& entry = m.at(row, c);
        if (!entry.is_zero()) {
          TPoly term = entry * solve(mask & ~(1u << c));
          if (position % 2 == 0)
            acc += term;
          else
            acc -= term;
        }
        ++position;
      }
    }
    return memo.emplace(mask, std::move(acc)).first->second;
  };
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  return solve(full);
}

}  // namespace kalman
