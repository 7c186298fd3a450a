#include "sas/vas.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace sas {

namespace {

using BigInt = boost::multiprecision::cpp_int;

constexpr std::size_t kMaxProfiles = 65536;     // hard cap on (k+1)^d
constexpr std::size_t kMaxExactProfiles = 512;  // cap for the evaluation engine
constexpr std::size_t kMaxEnumProfiles = 81;    // cap for enumeration/canonical
constexpr int kMaxVasScanDegree = 8;            // d! coordinate scans

std::size_t checked_profile_count(int k, int d, std::size_t cap = kMaxProfiles) {
  if (k < 1) throw std::invalid_argument("profile entries need k >= 1");
  if (d < 1) throw std::invalid_argument("profile length must be at least 1");
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) {
    n *= static_cast<std::size_t>(k) + 1;
    if (n > cap)
      throw std::invalid_argument("profile space (k+1)^d exceeds " + std::to_string(cap));
  }
  return n;
}

std::int64_t binomial64(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::int64_t v = 1;
  for (int t = 1; t <= r; ++t) v = v * (n - r + t) / t;
  return v;
}

BigInt factorial_big(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void strip_zeros(std::vector<BigRational>& coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

// C(m - shift, j) as a polynomial in m: the falling factorial
// (m-shift)(m-shift-1)...(m-shift-j+1) / j!.
RationalPolynomial binomial_in_m(int shift, int j) {
  RationalPolynomial p = poly_constant(1);
  for (int t = 0; t < j; ++t) {
    RationalPolynomial lin;
    lin.coeffs = {BigRational(-(shift + t)), BigRational(1)};
    p = p * lin;
  }
  if (j >= 2) {
    const BigRational inv(BigInt(1), factorial_big(j));
    for (auto& c : p.coeffs) c *= inv;
  }
  return p;
}

void check_color_range(int k, int value, const char* what) {
  if (value < 0 || value > k)
    throw std::invalid_argument(std::string(what) + " " + std::to_string(value) +
                                " out of range 0.." + std::to_string(k));
}

void check_profile(int k, const std::vector<int>& p, const char* what) {
  if (p.empty()) throw std::invalid_argument(std::string(what) + " must be nonempty");
  for (int e : p) check_color_range(k, e, what);
}

std::string rational_to_string(const BigRational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// Digit tables: digits[i*d + j] = coordinate j of the profile with index i.
std::vector<std::uint8_t> digit_table(int k, int d, std::size_t n) {
  std::vector<std::uint8_t> digits(n * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t x = i;
    for (int j = 0; j < d; ++j) {
      digits[i * d + j] = static_cast<std::uint8_t>(x % (k + 1));
      x /= k + 1;
    }
  }
  return digits;
}

// Exact integer evaluations of the per-coordinate structure polynomials at
// the kd+1 points m = 2k .. 2k+kd.  Two structure polynomials (degree at
// most kd) that agree at all these points are identical, so comparing the
// evaluation vectors decides polynomial equality exactly.
struct EvalContext {
  int k = 0, d = 0, pts = 0;
  std::size_t n = 0;
  std::vector<std::uint8_t> digits;  // n x d
  std::vector<std::int64_t> val;     // ((a*(k+1)+b)*(k+1)+c)*pts + t

  const std::int64_t* row(int a, int b, int c) const {
    return val.data() + (((static_cast<std::size_t>(a) * (k + 1) + b) * (k + 1)) + c) * pts;
  }
};

EvalContext make_context(int k, int d) {
  EvalContext ctx;
  ctx.k = k;
  ctx.d = d;
  ctx.pts = k * d + 1;
  if (ctx.pts > 24) throw std::invalid_argument("evaluation engine limited to k*d <= 23");
  ctx.n = checked_profile_count(k, d, kMaxExactProfiles);
  ctx.digits = digit_table(k, d, ctx.n);
  ctx.val.assign(static_cast<std::size_t>(k + 1) * (k + 1) * (k + 1) * ctx.pts, 0);
  std::int64_t max_val = 0;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b)
      for (int c = 0; c <= k; ++c) {
        const RationalPolynomial p = johnson_p(k, a, b, c);
        for (int t = 0; t < ctx.pts; ++t) {
          const BigRational v = p.eval(BigRational(2 * k + t));
          if (boost::multiprecision::denominator(v) != 1)
            throw std::logic_error("structure polynomial evaluated to a non-integer");
          const BigInt num = boost::multiprecision::numerator(v);
          if (num < 0 || num > std::numeric_limits<std::int64_t>::max())
            throw std::overflow_error("structure polynomial evaluation out of range");
          const auto iv = num.convert_to<std::int64_t>();
          ctx.val[(((static_cast<std::size_t>(a) * (k + 1) + b) * (k + 1)) + c) * ctx.pts + t] = iv;
          max_val = std::max(max_val, iv);
        }
      }
  // Signature sums accumulate at most n^2 products of d per-coordinate
  // values; make sure they cannot overflow a signed 64-bit accumulator.
  long double bound = 1.0L;
  for (int j = 0; j < d; ++j) bound *= static_cast<long double>(std::max<std::int64_t>(max_val, 1));
  bound *= static_cast<long double>(ctx.n) * static_cast<long double>(ctx.n);
  if (bound > 4.0e18L)
    throw std::overflow_error("exact signature sums would overflow 64-bit integers");
  return ctx;
}

// Accumulates, for one source profile a, the evaluation vector of
// p^a_{beta,gamma} at every test point, indexed by (beta*rank+gamma)*pts+t.
void profile_signature(const EvalContext& ctx, const std::vector<std::uint16_t>& colors,
                       std::uint32_t rank, std::size_t a, std::vector<std::int64_t>& sig) {
  const int d = ctx.d, pts = ctx.pts;
  sig.assign(static_cast<std::size_t>(rank) * rank * pts, 0);
  const std::uint8_t* da = ctx.digits.data() + a * d;
  std::array<const std::int64_t*, 16> rows{};
  std::array<std::int64_t, 24> prod{};
  for (std::size_t b = 0; b < ctx.n; ++b) {
    const std::uint8_t* db = ctx.digits.data() + b * d;
    for (std::size_t c = 0; c < ctx.n; ++c) {
      const std::uint8_t* dc = ctx.digits.data() + c * d;
      bool ok = true;
      for (int j = 0; j < d; ++j) {
        const int aj = da[j], bj = db[j], cj = dc[j];
        if (aj > bj + cj || bj > aj + cj || cj > aj + bj) {
          ok = false;
          break;
        }
        rows[j] = ctx.row(aj, bj, cj);
      }
      if (!ok) continue;
      for (int t = 0; t < pts; ++t) prod[t] = rows[0][t];
      for (int j = 1; j < d; ++j)
        for (int t = 0; t < pts; ++t) prod[t] *= rows[j][t];
      std::int64_t* out =
          sig.data() + (static_cast<std::size_t>(colors[b]) * rank + colors[c]) * pts;
      for (int t = 0; t < pts; ++t) out[t] += prod[t];
    }
  }
}

void check_cells_within_orbits(const VectorPartition& s) {
  const std::size_t n = s.num_profiles();
  std::vector<std::uint8_t> digits = digit_table(s.k, s.d, n);
  std::vector<std::vector<std::uint8_t>> first(s.rank);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint8_t> sorted(digits.begin() + i * s.d, digits.begin() + (i + 1) * s.d);
    std::sort(sorted.begin(), sorted.end());
    auto& f = first[s.colors[i]];
    if (f.empty())
      f = std::move(sorted);
    else if (f != sorted)
      throw std::invalid_argument(
          "cell " + std::to_string(s.colors[i]) +
          " mixes profiles from different coordinate-permutation orbits");
  }
}

void check_partition_shape(const VectorPartition& s) {
  const std::size_t n = checked_profile_count(s.k, s.d);
  if (s.colors.size() != n) throw std::invalid_argument("color array has wrong length");
}

// Symbolic p^a_{beta,gamma}: sum of coordinatewise Johnson products over the
// members of the two cells.
RationalPolynomial symbolic_structure_polynomial(const VectorPartition& s,
                                                 const std::vector<int>& a,
                                                 std::uint32_t beta, std::uint32_t gamma) {
  RationalPolynomial total;
  const std::size_t n = s.num_profiles();
  for (std::size_t b = 0; b < n; ++b) {
    if (s.colors[b] != beta) continue;
    const std::vector<int> pb = profile_at(b, s.k, s.d);
    for (std::size_t c = 0; c < n; ++c) {
      if (s.colors[c] != gamma) continue;
      total = total + johnson_p_profile(s.k, a, pb, profile_at(c, s.k, s.d));
    }
  }
  return total;
}

// Coordinate permutations h with colors[h . p] = f(colors[p]) for a
// well-defined bijection f (weak = true) or f = identity (weak = false).
std::vector<Permutation> coordinate_scan(const VectorPartition& s, bool weak) {
  if (s.d > kMaxVasScanDegree)
    throw std::invalid_argument("coordinate scans limited to d <= " +
                                std::to_string(kMaxVasScanDegree));
  const std::size_t n = s.num_profiles();
  std::vector<std::size_t> pow(s.d);
  {
    std::size_t p = 1;
    for (int j = 0; j < s.d; ++j, p *= s.k + 1) pow[j] = p;
  }
  const std::vector<std::uint8_t> digits = digit_table(s.k, s.d, n);
  std::vector<int> h(s.d);
  std::iota(h.begin(), h.end(), 0);
  std::vector<Permutation> found;
  std::vector<std::uint16_t> map_to(s.rank);
  do {
    bool ok = true;
    std::fill(map_to.begin(), map_to.end(), std::uint16_t{0xffff});
    std::vector<bool> hit(s.rank, false);
    for (std::size_t i = 0; i < n && ok; ++i) {
      std::size_t image = 0;
      for (int j = 0; j < s.d; ++j) image += digits[i * s.d + j] * pow[h[j]];
      const std::uint16_t from = s.colors[i], to = s.colors[image];
      if (!weak) {
        ok = from == to;
      } else if (map_to[from] == 0xffff) {
        if (hit[to]) {
          ok = false;
        } else {
          map_to[from] = to;
          hit[to] = true;
        }
      } else {
        ok = map_to[from] == to;
      }
    }
    if (ok) {
      Permutation p;
      p.img.assign(h.begin(), h.end());
      found.push_back(std::move(p));
    }
  } while (std::next_permutation(h.begin(), h.end()));
  return found;
}

std::size_t apply_to_profile_index(const Permutation& h, std::size_t index, int k, int d) {
  std::size_t out = 0, x = index;
  for (int j = 0; j < d; ++j) {
    std::size_t digit = x % (k + 1);
    x /= k + 1;
    std::size_t p = 1;
    for (int t = 0; t < h.img[j]; ++t) p *= k + 1;
    out += digit * p;
  }
  return out;
}

std::vector<std::uint16_t> normalized_colors(const std::vector<std::uint16_t>& raw,
                                             std::uint32_t num_colors) {
  std::vector<std::uint16_t> out(raw.size());
  std::uint16_t next = 0;
  std::vector<std::uint16_t> seen(num_colors, 0xffff);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (seen[raw[i]] == 0xffff) seen[raw[i]] = next++;
    out[i] = seen[raw[i]];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polynomials

BigRational RationalPolynomial::eval(const BigRational& m) const {
  BigRational acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * m + coeffs[i];
  return acc;
}

std::string RationalPolynomial::to_string() const {
  if (coeffs.empty()) return "0";
  std::string out;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    const BigRational& c = coeffs[i];
    if (c == 0) continue;
    const bool negative = c < 0;
    const BigRational ac = negative ? BigRational(-c) : c;
    if (out.empty())
      out = negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    const bool integer_coeff = boost::multiprecision::denominator(ac) == 1;
    std::string cs = rational_to_string(ac);
    if (!integer_coeff) cs = "(" + cs + ")";
    if (i == 0) {
      out += cs;
    } else {
      if (ac != 1) out += cs + "*";
      out += i == 1 ? "m" : "m^" + std::to_string(i);
    }
  }
  return out.empty() ? "0" : out;
}

RationalPolynomial poly_constant(const BigRational& value) {
  RationalPolynomial p;
  if (value != 0) p.coeffs = {value};
  return p;
}

RationalPolynomial operator+(const RationalPolynomial& p, const RationalPolynomial& q) {
  RationalPolynomial r;
  r.coeffs.resize(std::max(p.coeffs.size(), q.coeffs.size()), BigRational(0));
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) r.coeffs[i] += p.coeffs[i];
  for (std::size_t i = 0; i < q.coeffs.size(); ++i) r.coeffs[i] += q.coeffs[i];
  strip_zeros(r.coeffs);
  return r;
}

RationalPolynomial operator-(const RationalPolynomial& p, const RationalPolynomial& q) {
  RationalPolynomial neg = q;
  for (auto& c : neg.coeffs) c = -c;
  return p + neg;
}

RationalPolynomial operator*(const RationalPolynomial& p, const RationalPolynomial& q) {
  RationalPolynomial r;
  if (p.coeffs.empty() || q.coeffs.empty()) return r;
  r.coeffs.assign(p.coeffs.size() + q.coeffs.size() - 1, BigRational(0));
  for (std::size_t i = 0; i < p.coeffs.size(); ++i)
    for (std::size_t j = 0; j < q.coeffs.size(); ++j) r.coeffs[i + j] += p.coeffs[i] * q.coeffs[j];
  strip_zeros(r.coeffs);
  return r;
}

RationalPolynomial johnson_p(int k, int a, int b, int c) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  check_color_range(k, a, "distance");
  check_color_range(k, b, "distance");
  check_color_range(k, c, "distance");
  RationalPolynomial total;
  for (int i = 0; i <= k - a; ++i) {
    const std::int64_t f =
        binomial64(k - a, i) * binomial64(a, k - b - i) * binomial64(a, k - c - i);
    if (f == 0) continue;
    const int j = b + c + i - k;
    if (j < 0) continue;
    total = total + poly_constant(BigRational(f)) * binomial_in_m(k + a, j);
  }
  return total;
}

std::int64_t johnson_p_oracle(int m, int k, int a, int b, int c) {
  if (k < 1 || k > 4) throw std::invalid_argument("oracle supports 1 <= k <= 4");
  if (m < 2 * k || m > 14) throw std::invalid_argument("oracle supports 2k <= m <= 14");
  check_color_range(k, a, "distance");
  check_color_range(k, b, "distance");
  check_color_range(k, c, "distance");
  const std::uint32_t u = (std::uint32_t{1} << k) - 1;
  const std::uint32_t v = ((std::uint32_t{1} << (k - a)) - 1) | (((std::uint32_t{1} << a) - 1) << k);
  std::int64_t count = 0;
  for (std::uint32_t w = 0; w < (std::uint32_t{1} << m); ++w) {
    if (std::popcount(w) != k) continue;
    if (std::popcount(u & ~w) == b && std::popcount(w & ~v) == c) ++count;
  }
  return count;
}

bool delta_condition(int a, int b, int c) { return a <= b + c && b <= a + c && c <= a + b; }

bool delta_condition(const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& c) {
  if (a.size() != b.size() || a.size() != c.size())
    throw std::invalid_argument("profiles must have equal length");
  for (std::size_t j = 0; j < a.size(); ++j)
    if (!delta_condition(a[j], b[j], c[j])) return false;
  return true;
}

RationalPolynomial johnson_p_profile(int k, const std::vector<int>& a, const std::vector<int>& b,
                                     const std::vector<int>& c) {
  if (a.size() != b.size() || a.size() != c.size())
    throw std::invalid_argument("profiles must have equal length");
  RationalPolynomial total = poly_constant(1);
  for (std::size_t j = 0; j < a.size(); ++j) {
    total = total * johnson_p(k, a[j], b[j], c[j]);
    if (total.is_zero()) return total;
  }
  return total;
}

RationalPolynomial leading_term(int k, const std::vector<int>& a, const std::vector<int>& b,
                                const std::vector<int>& c) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  if (a.size() != b.size() || a.size() != c.size())
    throw std::invalid_argument("profiles must have equal length");
  BigRational coeff = 1;
  int power = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    check_color_range(k, a[j], "distance");
    check_color_range(k, b[j], "distance");
    check_color_range(k, c[j], "distance");
    if (b[j] != a[j] + c[j])
      throw std::invalid_argument("leading term requires b = a + c componentwise");
    coeff *= BigRational(factorial_big(k - a[j]), factorial_big(k - b[j]) *
                                                      factorial_big(c[j]) * factorial_big(c[j]));
    power += c[j];
  }
  RationalPolynomial p;
  p.coeffs.assign(power + 1, BigRational(0));
  p.coeffs[power] = coeff;
  return p;
}

// ---------------------------------------------------------------------------
// Profile partitions

std::size_t profile_index(const std::vector<int>& profile, int k) {
  check_profile(k, profile, "profile entry");
  std::size_t index = 0, p = 1;
  for (std::size_t j = 0; j < profile.size(); ++j, p *= k + 1) index += profile[j] * p;
  return index;
}

std::vector<int> profile_at(std::size_t index, int k, int d) {
  const std::size_t n = checked_profile_count(k, d);
  if (index >= n) throw std::invalid_argument("profile index out of range");
  std::vector<int> p(d);
  for (int j = 0; j < d; ++j) {
    p[j] = static_cast<int>(index % (k + 1));
    index /= k + 1;
  }
  return p;
}

std::string profile_to_string(const std::vector<int>& profile) {
  std::string out = "(";
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(profile[j]);
  }
  return out + ")";
}

VectorPartition make_vector_partition(int k, int d, const std::vector<std::uint32_t>& keys) {
  const std::size_t n = checked_profile_count(k, d);
  if (keys.size() != n) throw std::invalid_argument("key array has wrong length");
  VectorPartition s;
  s.k = k;
  s.d = d;
  s.colors.assign(n, 0);
  std::map<std::uint32_t, std::uint16_t> renumber;
  for (std::size_t i = 0; i < n; ++i) {
    if (renumber.size() >= 65535 && !renumber.contains(keys[i]))
      throw std::invalid_argument("too many cells");
    auto [it, fresh] = renumber.try_emplace(keys[i], static_cast<std::uint16_t>(renumber.size()));
    (void)fresh;
    s.colors[i] = it->second;
  }
  s.rank = static_cast<std::uint32_t>(renumber.size());
  return s;
}

VectorPartition vas_orbital(const PermGroup& g, int k) {
  const std::size_t n = checked_profile_count(k, g.degree);
  std::vector<std::uint32_t> root(n);
  std::iota(root.begin(), root.end(), 0);
  const auto find = [&](std::uint32_t x) {
    while (root[x] != x) {
      root[x] = root[root[x]];
      x = root[x];
    }
    return x;
  };
  for (const Permutation& h : g.generators)
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t a = find(static_cast<std::uint32_t>(i));
      const std::uint32_t b = find(static_cast<std::uint32_t>(
          apply_to_profile_index(h, i, k, g.degree)));
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  std::vector<std::uint32_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = find(static_cast<std::uint32_t>(i));
  return make_vector_partition(k, g.degree, keys);
}

VectorPartition vas_trivial(int k, int d) {
  const std::size_t n = checked_profile_count(k, d);
  const std::vector<std::uint8_t> digits = digit_table(k, d, n);
  std::vector<std::uint32_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> sorted(digits.begin() + i * d, digits.begin() + (i + 1) * d);
    std::sort(sorted.begin(), sorted.end());
    keys[i] = static_cast<std::uint32_t>(profile_index(sorted, k));
  }
  return make_vector_partition(k, d, keys);
}

VectorPartition vas_discrete(int k, int d) {
  const std::size_t n = checked_profile_count(k, d);
  std::vector<std::uint32_t> keys(n);
  std::iota(keys.begin(), keys.end(), 0);
  return make_vector_partition(k, d, keys);
}

bool vas_is_homogeneous(const VectorPartition& s) {
  check_partition_shape(s);
  const std::uint16_t unit_color = s.colors[1];  // profile (1,0,...,0)
  std::size_t pow = 1;
  for (int j = 0; j < s.d; ++j, pow *= s.k + 1)
    if (s.colors[pow] != unit_color) return false;
  std::size_t members = 0;
  for (const std::uint16_t c : s.colors) members += c == unit_color;
  return members == static_cast<std::size_t>(s.d);
}

PermGroup vas_automorphism_group(const VectorPartition& s) {
  check_partition_shape(s);
  std::vector<Permutation> elements = coordinate_scan(s, false);
  PermGroup g;
  g.degree = s.d;
  g.elements = std::move(elements);
  g.element_keys.reserve(g.elements.size());
  for (const auto& e : g.elements) g.element_keys.push_back(encode_permutation(e));
  std::sort(g.element_keys.begin(), g.element_keys.end());
  g.generators = small_generating_set(g);
  return g;
}

bool vas_is_schurian(const VectorPartition& s) {
  return s == vas_orbital(vas_automorphism_group(s), s.k);
}

// ---------------------------------------------------------------------------
// Coherence

std::string VasWitness::to_string() const {
  return "cell " + std::to_string(alpha) + ": representative " + profile_to_string(a) +
         " gives p[" + std::to_string(beta) + "," + std::to_string(gamma) + "] = " +
         p_a.to_string() + " but " + profile_to_string(a_prime) + " gives " +
         p_a_prime.to_string();
}

VasReport vas_check(const VectorPartition& s) {
  check_partition_shape(s);
  check_cells_within_orbits(s);
  const EvalContext ctx = make_context(s.k, s.d);
  std::vector<std::vector<std::size_t>> members(s.rank);
  for (std::size_t i = 0; i < ctx.n; ++i) members[s.colors[i]].push_back(i);
  std::vector<std::int64_t> sig_rep, sig_other;
  for (std::uint32_t cell = 0; cell < s.rank; ++cell) {
    if (members[cell].size() < 2) continue;
    const std::size_t rep = members[cell].front();
    profile_signature(ctx, s.colors, s.rank, rep, sig_rep);
    for (std::size_t t = 1; t < members[cell].size(); ++t) {
      const std::size_t other = members[cell][t];
      profile_signature(ctx, s.colors, s.rank, other, sig_other);
      if (sig_other == sig_rep) continue;
      const std::size_t at = static_cast<std::size_t>(
          std::mismatch(sig_rep.begin(), sig_rep.end(), sig_other.begin()).first -
          sig_rep.begin());
      VasWitness w;
      w.alpha = cell;
      w.beta = static_cast<std::uint32_t>(at / ctx.pts / s.rank);
      w.gamma = static_cast<std::uint32_t>(at / ctx.pts % s.rank);
      w.a = profile_at(rep, s.k, s.d);
      w.a_prime = profile_at(other, s.k, s.d);
      w.p_a = symbolic_structure_polynomial(s, w.a, w.beta, w.gamma);
      w.p_a_prime = symbolic_structure_polynomial(s, w.a_prime, w.beta, w.gamma);
      VasReport report;
      report.coherent = false;
      report.witness = std::move(w);
      return report;
    }
  }
  VasReport report;
  report.coherent = true;
  return report;
}

RationalPolynomial vas_structure_polynomial(const VectorPartition& s, std::uint32_t alpha,
                                            std::uint32_t beta, std::uint32_t gamma) {
  check_partition_shape(s);
  if (alpha >= s.rank || beta >= s.rank || gamma >= s.rank)
    throw std::invalid_argument("cell id out of range");
  for (std::size_t i = 0; i < s.num_profiles(); ++i)
    if (s.colors[i] == alpha)
      return symbolic_structure_polynomial(s, profile_at(i, s.k, s.d), beta, gamma);
  throw std::logic_error("empty cell");
}

VectorPartition vas_wl_stabilize(const VectorPartition& s) {
  check_partition_shape(s);
  check_cells_within_orbits(s);
  const EvalContext ctx = make_context(s.k, s.d);
  VectorPartition cur = s;
  // Re-normalize arbitrary input colors.
  {
    std::vector<std::uint32_t> keys(cur.colors.begin(), cur.colors.end());
    cur = make_vector_partition(s.k, s.d, keys);
  }
  for (;;) {
    std::map<std::pair<std::uint16_t, std::vector<std::int64_t>>, std::uint32_t> groups;
    std::vector<std::uint32_t> keys(ctx.n);
    std::vector<std::int64_t> sig;
    for (std::size_t i = 0; i < ctx.n; ++i) {
      profile_signature(ctx, cur.colors, cur.rank, i, sig);
      auto [it, fresh] = groups.try_emplace({cur.colors[i], sig},
                                            static_cast<std::uint32_t>(groups.size()));
      (void)fresh;
      keys[i] = it->second;
    }
    if (groups.size() == cur.rank) return cur;
    cur = make_vector_partition(s.k, s.d, keys);
  }
}

// ---------------------------------------------------------------------------
// Enumeration

std::string vas_canonical_form(const VectorPartition& s) {
  check_partition_shape(s);
  if (s.num_profiles() > 128)
    throw std::invalid_argument("canonical form limited to 128 profiles");
  if (s.rank > 255) throw std::invalid_argument("canonical form limited to 255 cells");
  if (s.d > kMaxVasScanDegree)
    throw std::invalid_argument("canonical form limited to d <= " +
                                std::to_string(kMaxVasScanDegree));
  const std::size_t n = s.num_profiles();
  std::vector<int> h(s.d);
  std::iota(h.begin(), h.end(), 0);
  std::vector<std::size_t> pow(s.d);
  {
    std::size_t p = 1;
    for (int j = 0; j < s.d; ++j, p *= s.k + 1) pow[j] = p;
  }
  const std::vector<std::uint8_t> digits = digit_table(s.k, s.d, n);
  std::string best;
  std::vector<std::uint16_t> permuted(n);
  do {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t image = 0;
      for (int j = 0; j < s.d; ++j) image += digits[i * s.d + j] * pow[h[j]];
      permuted[image] = s.colors[i];
    }
    const std::vector<std::uint16_t> norm = normalized_colors(permuted, s.rank);
    std::string form(n, '\0');
    for (std::size_t i = 0; i < n; ++i) form[i] = static_cast<char>(norm[i]);
    if (best.empty() || form < best) best = std::move(form);
  } while (std::next_permutation(h.begin(), h.end()));
  return best;
}

std::vector<VectorPartition> vas_refinement_children(const VectorPartition& s) {
  check_partition_shape(s);
  const std::size_t n = s.num_profiles();
  if (n > kMaxEnumProfiles)
    throw std::invalid_argument("refinement search limited to (k+1)^d <= " +
                                std::to_string(kMaxEnumProfiles));
  const std::vector<std::uint8_t> digits = digit_table(s.k, s.d, n);
  const auto dominated = [&](std::size_t lo, std::size_t hi) {
    for (int j = 0; j < s.d; ++j)
      if (digits[lo * s.d + j] > digits[hi * s.d + j]) return false;
    return true;
  };
  const std::vector<Permutation> weak = coordinate_scan(s, true);

  std::map<std::string, VectorPartition> children;
  std::vector<std::vector<std::size_t>> members(s.rank);
  for (std::size_t i = 0; i < n; ++i) members[s.colors[i]].push_back(i);

  for (std::uint32_t cell = 0; cell < s.rank; ++cell) {
    const auto& cell_members = members[cell];
    const std::size_t m = cell_members.size();
    if (m < 2) continue;
    // Members of any cell of a finer coherent partition share, for every
    // current cell, the number of members they dominate and are dominated
    // by; split subsets are therefore confined to one class of that
    // signature.
    std::map<std::vector<std::int32_t>, std::vector<std::size_t>> classes;
    for (const std::size_t a : cell_members) {
      std::vector<std::int32_t> key(2 * s.rank, 0);
      for (std::size_t b = 0; b < n; ++b) {
        if (dominated(a, b)) ++key[2 * s.colors[b]];
        if (dominated(b, a)) ++key[2 * s.colors[b] + 1];
      }
      classes[key].push_back(a);
    }
    // Stabilizer of the cell inside the weak coordinate permutations,
    // precomputed as full index maps (identity dropped).
    std::vector<std::vector<std::uint32_t>> stab_maps;
    for (const Permutation& h : weak) {
      if (h.is_identity()) continue;
      if (s.colors[apply_to_profile_index(h, cell_members.front(), s.k, s.d)] != cell) continue;
      std::vector<std::uint32_t> map(n);
      for (std::size_t i = 0; i < n; ++i)
        map[i] = static_cast<std::uint32_t>(apply_to_profile_index(h, i, s.k, s.d));
      stab_maps.push_back(std::move(map));
    }
    std::vector<std::vector<std::size_t>> subsets;
    std::vector<std::size_t> alpha, image;
    for (const auto& [key, items] : classes) {
      (void)key;
      if (items.size() >= 63) throw std::logic_error("split class unexpectedly large");
      const std::uint64_t limit = std::uint64_t{1} << items.size();
      for (std::uint64_t mask = 1; mask < limit; ++mask) {
        if (2 * static_cast<std::size_t>(std::popcount(mask)) > m) continue;
        alpha.clear();
        for (std::size_t t = 0; t < items.size(); ++t)
          if (mask >> t & 1) alpha.push_back(items[t]);
        // Keep one representative per stabilizer orbit: alpha must be the
        // least image set.
        bool minimal = true;
        for (const auto& map : stab_maps) {
          image.clear();
          for (const std::size_t a : alpha) image.push_back(map[a]);
          std::sort(image.begin(), image.end());
          if (image < alpha) {
            minimal = false;
            break;
          }
        }
        if (minimal) subsets.push_back(alpha);
      }
    }
    for (const auto& alpha : subsets) {
      std::vector<std::uint32_t> keys(n);
      for (std::size_t i = 0; i < n; ++i) keys[i] = std::uint32_t{s.colors[i]} << 1;
      for (const std::size_t a : alpha) keys[a] |= 1;
      VectorPartition child = vas_wl_stabilize(make_vector_partition(s.k, s.d, keys));
      std::string form = vas_canonical_form(child);
      children.try_emplace(std::move(form), std::move(child));
    }
  }
  std::vector<VectorPartition> out;
  out.reserve(children.size());
  for (auto& [form, child] : children) {
    (void)form;
    out.push_back(std::move(child));
  }
  return out;
}

std::vector<EnumeratedVas> vas_enumerate(int k, int d) {
  const std::size_t n = checked_profile_count(k, d, kMaxEnumProfiles);
  (void)n;
  const VectorPartition seed = vas_trivial(k, d);
  if (vas_wl_stabilize(seed) != seed)
    throw std::logic_error("coordinate-orbit partition failed to be coherent");
  std::map<std::string, VectorPartition> seen;
  std::set<std::pair<std::uint32_t, std::string>> frontier;
  {
    std::string form = vas_canonical_form(seed);
    frontier.emplace(seed.rank, form);
    seen.emplace(std::move(form), seed);
  }
  while (!frontier.empty()) {
    const auto it = frontier.begin();
    const VectorPartition node = seen.at(it->second);
    frontier.erase(it);
    for (VectorPartition& child : vas_refinement_children(node)) {
      std::string form = vas_canonical_form(child);
      if (seen.contains(form)) continue;
      frontier.emplace(child.rank, form);
      seen.emplace(std::move(form), std::move(child));
    }
  }
  std::vector<EnumeratedVas> out;
  out.reserve(seen.size());
  for (const auto& [form, part] : seen) {
    // Store the canonical representative itself so output is independent of
    // the search path.
    std::vector<std::uint32_t> keys(form.size());
    for (std::size_t i = 0; i < form.size(); ++i)
      keys[i] = static_cast<std::uint8_t>(form[i]);
    EnumeratedVas entry;
    entry.scheme = make_vector_partition(k, d, keys);
    const VasReport report = vas_check(entry.scheme);
    if (!report.coherent)
      throw std::logic_error("stabilized partition failed the exact coherence check: " +
                             report.witness->to_string());
    entry.homogeneous = vas_is_homogeneous(entry.scheme);
    entry.schurian = vas_is_schurian(entry.scheme);
    (void)part;
    out.push_back(std::move(entry));
  }
  return out;
}

// ---------------------------------------------------------------------------
// k = 1 correspondence

SetPartition vas_to_sas(const VectorPartition& s) {
  check_partition_shape(s);
  if (s.k != 1) throw std::invalid_argument("subset correspondence requires k = 1");
  if (s.d > kMaxDegree)
    throw std::invalid_argument("degree exceeds subset-partition limit");
  std::vector<std::uint64_t> keys(s.colors.begin(), s.colors.end());
  return make_partition_from_keys(s.d, keys);
}

VectorPartition sas_to_vas(const SetPartition& s) {
  std::vector<std::uint32_t> keys(s.colors.begin(), s.colors.end());
  return make_vector_partition(1, s.degree, keys);
}

// ---------------------------------------------------------------------------
// Serialization

VectorPartition vas_parse(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("k") || !j.contains("d") || !j.contains("cells"))
    throw std::invalid_argument("expected object with \"k\", \"d\" and \"cells\"");
  if (!j["k"].is_number_integer() || !j["d"].is_number_integer())
    throw std::invalid_argument("\"k\" and \"d\" must be integers");
  const int k = j["k"].get<int>(), d = j["d"].get<int>();
  const std::size_t n = checked_profile_count(k, d);
  if (!j["cells"].is_array()) throw std::invalid_argument("\"cells\" must be an array");
  std::vector<std::uint32_t> keys(n, 0);
  std::vector<bool> used(n, false);
  std::uint32_t cell_id = 0;
  for (const auto& cell : j["cells"]) {
    ++cell_id;
    if (!cell.is_array() || cell.empty())
      throw std::invalid_argument("each cell must be a nonempty array of profiles");
    for (const auto& member : cell) {
      if (!member.is_array() || member.size() != static_cast<std::size_t>(d))
        throw std::invalid_argument("each profile must be an array of " + std::to_string(d) +
                                    " integers");
      std::vector<int> profile;
      for (const auto& e : member) {
        if (!e.is_number_integer())
          throw std::invalid_argument("profile entries must be integers");
        profile.push_back(e.get<int>());
      }
      check_profile(k, profile, "profile entry");
      const std::size_t index = profile_index(profile, k);
      if (used[index])
        throw std::invalid_argument("not a partition: profile " + profile_to_string(profile) +
                                    " appears twice");
      used[index] = true;
      keys[index] = cell_id;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!used[i])
      throw std::invalid_argument("not a partition: profile " +
                                  profile_to_string(profile_at(i, k, d)) + " is missing");
  return make_vector_partition(k, d, keys);
}

std::string vas_serialize(const VectorPartition& s) {
  check_partition_shape(s);
  nlohmann::json j;
  j["k"] = s.k;
  j["d"] = s.d;
  j["cells"] = nlohmann::json::array();
  std::vector<std::vector<std::size_t>> members(s.rank);
  for (std::size_t i = 0; i < s.num_profiles(); ++i) members[s.colors[i]].push_back(i);
  for (const auto& cell : members) {
    nlohmann::json jcell = nlohmann::json::array();
    for (const std::size_t i : cell) jcell.push_back(profile_at(i, s.k, s.d));
    j["cells"].push_back(std::move(jcell));
  }
  return j.dump();
}

VectorPartition vas_load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return vas_parse(buffer.str());
}

void vas_save_file(const VectorPartition& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
  out << vas_serialize(s) << "\n";
}

}  // namespace sas
