#ifndef POLYFREE_TWISTED_HPP_
#define POLYFREE_TWISTED_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyfree/mapping_torus.hpp"
#include "polyfree/pfgroup.hpp"

namespace polyfree {

/// Canonical class invariant for the twisted action g ~ s g f(s)^-1:
/// the image of the exponent vector of g in the quotient of Z^(r+s) by
/// the abelianized relators of the group together with the row lattice
/// of (I - f^ab). Equal residues are necessary for twisted conjugacy.
class AbelianClassContext {
 public:
  AbelianClassContext(const PfGroup& g, const PfMorphism& f);

  std::vector<long long> exponent_vector(const PfElement& e) const;
  std::vector<long long> invariant(const PfElement& e) const;
  std::string invariant_key(const PfElement& e) const;
  const AbelianGroupStructure& structure() const { return quotient_.structure(); }

 private:
  const PfGroup* group_;
  LatticeQuotient quotient_;
};

std::vector<long long> abelian_class_invariant(const PfGroup& g, const PfMorphism& f,
                                               const PfElement& e);

/// Ball-level estimate of the twisted class count: a union-find upper
/// bound (merging g with s g f(s)^-1 whenever both normal forms lie in
/// the ball) and an abelian-invariant lower bound. The conjugator loop
/// may be split across workers; the resulting partition and report are
/// identical for every worker count.
struct OrbitReport {
  int ball_radius = 0;
  int conjugator_radius = 0;
  size_t ball_size = 0;
  size_t class_upper_bound = 0;
  size_t invariant_lower_bound = 0;
};

OrbitReport twisted_orbit_report(const PfGroup& g, const PfMorphism& f, int ball_radius,
                                 int conjugator_radius, int workers = 1);

/// Same oracle over a free group of the given rank.
OrbitReport twisted_orbit_report_free(int rank, const FreeMorphism& f, int ball_radius,
                                      int conjugator_radius, int workers = 1);

/// Exact orbit count of x -> x + sigma (I - M) on Z/n1 + ... + Z/nk.
long long finite_quotient_count(const std::vector<long long>& moduli, const IntMatrix& m);

// --- certificates ----------------------------------------------------------

/// Node of a certification tree. Leaves are either DirectComputation
/// (recomputed on demand by the engine that produced them) or named
/// axioms carrying a citation.
struct CertNode {
  std::string kind;
  std::string title;
  std::vector<std::pair<std::string, std::string>> facts;
  std::string citation;
  std::vector<CertNode> children;
};

struct Certificate {
  enum class Conclusion { RInfinite, RFinite, Undecided };
  Conclusion conclusion = Conclusion::Undecided;
  long long finite_value = 0;  // set only with RFinite
  std::optional<CertNode> root;
  std::vector<std::string> attempts;

  std::string conclusion_name() const;
  std::string serialize() const;  // stable indented key/value text
};

/// Tries, in order: quotient witnesses (polyfree series quotient, then the
/// free-abelian rank-2 quotient of a canonical mapping torus), the
/// finite-abelianization route, the center construction, the
/// trivial-fixed-quotient + infinite-kernel route, and the reflection-case
/// axiom for canonical tori. First success wins; every attempt is logged.
/// Requires a verified automorphism (two-sided inverse present). Words in
/// the certificate are printed with the given naming (defaults per group).
Certificate certify_r_infinite(const PfGroup& g, const PfMorphism& f,
                               const GroupNaming* naming = nullptr);

}  // namespace polyfree

#endif  // POLYFREE_TWISTED_HPP_
