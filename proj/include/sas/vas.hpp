#pragma once
// Vector association schemes: partitions of profile space {0..k}^d whose
// Johnson-power structure polynomials are representative-independent.
// Provides the exact structure polynomials of the Johnson scheme J(m,k) as
// rational polynomials in m, the triangle condition on color triples, an
// exact coherence check (integer evaluations at kd+1 points, which pin a
// polynomial of degree at most kd, plus symbolic witnesses on failure),
// orbit schemes, an exhaustive small-parameter enumeration, and the k = 1
// correspondence with subset partitions.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sas/core.hpp"
#include "sas/groups.hpp"

namespace sas {

using BigRational = boost::multiprecision::cpp_rational;

// Dense exact-coefficient polynomial in one variable m; coeffs[i] is the
// coefficient of m^i and the top coefficient is nonzero (empty = zero).
struct RationalPolynomial {
  std::vector<BigRational> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; } // -1 for 0
  BigRational eval(const BigRational& m) const;
  std::string to_string() const; // "(3/2)*m^2 - 3*m + 1", "0"
  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;
};

RationalPolynomial poly_constant(const BigRational& value);
RationalPolynomial operator+(const RationalPolynomial& p, const RationalPolynomial& q);
RationalPolynomial operator-(const RationalPolynomial& p, const RationalPolynomial& q);
RationalPolynomial operator*(const RationalPolynomial& p, const RationalPolynomial& q);

// Number of k-subsets w of [m] with |u \ w| = b and |w \ v| = c, for fixed
// k-subsets u, v with |u \ v| = a, as a polynomial in m:
//   sum_i C(k-a,i) C(a,k-b-i) C(a,k-c-i) C(m-k-a, b+c+i-k),
// out-of-range binomials vanishing and the last factor expanded via falling
// factorials.  Symmetric in (b, c).
RationalPolynomial johnson_p(int k, int a, int b, int c);

// The same count by brute force over all k-subsets of [m] (m >= 2k, and
// m <= 14, k <= 4 to keep the exhaustion small).
std::int64_t johnson_p_oracle(int m, int k, int a, int b, int c);

// Triangle condition: each of a, b, c is at most the sum of the other two.
// Equivalent to johnson_p(k,a,b,c) not being the zero polynomial.
bool delta_condition(int a, int b, int c);
// Componentwise over profiles of equal length.
bool delta_condition(const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& c);

// Product over coordinates: the structure polynomial of J(m,k)^d.
RationalPolynomial johnson_p_profile(int k, const std::vector<int>& a,
                                     const std::vector<int>& b, const std::vector<int>& c);

// Leading monomial of johnson_p_profile when b = a + c componentwise:
//   prod_i (k-a_i)! / ((k-b_i)! c_i!^2) * m^{c_i}.
// Throws std::invalid_argument unless b = a + c and entries are in range.
RationalPolynomial leading_term(int k, const std::vector<int>& a, const std::vector<int>& b,
                                const std::vector<int>& c);

// A partition of {0..k}^d.  colors[i] is the cell of the profile with
// mixed-radix index i (coordinate j contributes p_j * (k+1)^j); ids are
// normalized to first occurrence in index order.
struct VectorPartition {
  int k = 0;
  int d = 0;
  std::vector<std::uint16_t> colors;
  std::uint32_t rank = 0;

  std::size_t num_profiles() const { return colors.size(); }
  friend bool operator==(const VectorPartition&, const VectorPartition&) = default;
};

std::size_t profile_index(const std::vector<int>& profile, int k);
std::vector<int> profile_at(std::size_t index, int k, int d);
std::string profile_to_string(const std::vector<int>& profile); // "(0,1,2)"

VectorPartition make_vector_partition(int k, int d, const std::vector<std::uint32_t>& keys);

// Profiles colored by orbit under g permuting coordinates.
VectorPartition vas_orbital(const PermGroup& g, int k);
VectorPartition vas_trivial(int k, int d);  // coordinate-permutation orbits
VectorPartition vas_discrete(int k, int d); // every profile its own cell

// The orbit of the unit profile (0,...,0,1) is a single cell.
bool vas_is_homogeneous(const VectorPartition& s);
// Coordinate permutations preserving every cell.
PermGroup vas_automorphism_group(const VectorPartition& s);
// s equals the orbit partition of its own automorphism group.
bool vas_is_schurian(const VectorPartition& s);

struct VasWitness {
  std::uint32_t alpha = 0, beta = 0, gamma = 0;
  std::vector<int> a, a_prime;       // two members of alpha
  RationalPolynomial p_a, p_a_prime; // differing structure polynomials
  std::string to_string() const;
};

struct VasReport {
  bool coherent = false;
  std::optional<VasWitness> witness; // present when not coherent
};

// Checks representative independence of the structure polynomials
//   p^a_{beta,gamma} = sum over (b,c) in beta x gamma of the coordinatewise
//   product of Johnson polynomials.
// Cells must lie within coordinate-permutation orbits (std::invalid_argument
// otherwise).  Comparison is exact: integer evaluation at the kd+1 points
// m = 2k .. 2k+kd decides equality of polynomials of degree <= kd; the
// witness polynomials are reconstructed symbolically.
VasReport vas_check(const VectorPartition& s);

// The common structure polynomial p^alpha_{beta,gamma} of a coherent s.
RationalPolynomial vas_structure_polynomial(const VectorPartition& s, std::uint32_t alpha,
                                            std::uint32_t beta, std::uint32_t gamma);

// Coarsest refinement of s whose structure-constant evaluations are
// representative-independent; iterated signature grouping never merges
// cells, and its fixpoints are exactly the coherent partitions.  Input
// cells must lie within coordinate-permutation orbits.
VectorPartition vas_wl_stabilize(const VectorPartition& s);

// Stabilized single-cell splits of s: split subsets range over the
// domination-signature classes inside each cell (members of one cell of a
// finer coherent partition share those counts), bounded by half the cell,
// one per cell-stabilizer orbit, deduplicated by canonical form.
std::vector<VectorPartition> vas_refinement_children(const VectorPartition& s);

struct EnumeratedVas {
  VectorPartition scheme;
  bool homogeneous = false;
  bool schurian = false;
};

// Every vector association scheme on {0..k}^d up to coordinate relabeling,
// sorted by canonical form: breadth-first closure of vas_refinement_children
// from the coordinate-orbit partition, each result re-verified by vas_check.
// Requires (k+1)^d <= 81.
std::vector<EnumeratedVas> vas_enumerate(int k, int d);

// Least normalized color array over all coordinate relabelings, one byte
// per profile.
std::string vas_canonical_form(const VectorPartition& s);

// k = 1 correspondence with subset partitions: a 0/1 profile is the
// indicator vector of its support, and the mixed-radix profile index equals
// the subset bitmask, so color arrays carry over verbatim.
SetPartition vas_to_sas(const VectorPartition& s);
VectorPartition sas_to_vas(const SetPartition& s);

// JSON interchange: {"k": K, "d": D, "cells": [[[0,1,2],[2,0,1]], ...]}.
// Serialization lists cells by least profile index, members by index.
VectorPartition vas_parse(const std::string& text);
std::string vas_serialize(const VectorPartition& s);
VectorPartition vas_load_file(const std::string& path);
void vas_save_file(const VectorPartition& s, const std::string& path);

} // namespace sas
