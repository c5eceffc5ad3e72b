#ifndef POLYFREE_PFGROUP_HPP_
#define POLYFREE_PFGROUP_HPP_

#include <optional>
#include <string>
#include <vector>

#include "polyfree/matrix.hpp"
#include "polyfree/morphism.hpp"
#include "polyfree/word.hpp"

namespace polyfree {

struct ResourceCapError : std::runtime_error {
  explicit ResourceCapError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Per-quotient-generator action data. `twist` is the presentation map
/// phi(g): a -> g^-1 a g, so a group built from action lines satisfies the
/// relators g^-1 a g = twist(a) literally; `twist_inv` is its verified
/// inverse (a -> g a g^-1), which is what normal-form multiplication uses
/// when pushing quotient letters to the right.
struct QuotientAction {
  FreeMorphism twist;
  FreeMorphism twist_inv;
};

/// Element of F_r x| F_s in normal form: kernel word times quotient word.
struct PfElement {
  Word kernel;
  Word quotient;

  bool operator==(const PfElement& o) const {
    return kernel == o.kernel && quotient == o.quotient;
  }
  bool operator!=(const PfElement& o) const { return !(*this == o); }
  bool operator<(const PfElement& o) const;
  bool is_identity() const { return kernel.is_identity() && quotient.is_identity(); }
  size_t length() const { return kernel.length() + quotient.length(); }
  std::string key() const { return kernel.key() + "|" + quotient.key(); }
};

/// Split extension F_r x| F_s with verified per-generator automorphisms.
/// Direct products are the identity-action special case; Z factors are
/// rank-1 free groups.
class PfGroup {
 public:
  static PfGroup direct_product(int kernel_rank, int quotient_rank);

  /// `twists` holds the presentation map per quotient generator and an
  /// optional inverse. Missing inverses are derived for kernel rank <= 2
  /// (Nielsen reduction); rank >= 3 requires the inverse. All pairs are
  /// verified by two-sided composition.
  static PfGroup semidirect(
      int kernel_rank, int quotient_rank,
      std::vector<std::pair<FreeMorphism, std::optional<FreeMorphism>>> twists);

  int kernel_rank() const { return kernel_rank_; }
  int quotient_rank() const { return quotient_rank_; }
  const QuotientAction& action(int qgen) const { return actions_.at(qgen); }
  bool is_direct() const;

  PfElement identity() const;
  PfElement element(Word kernel, Word quotient) const;
  PfElement kernel_generator(int i, int sign = +1) const;
  PfElement quotient_generator(int j, int sign = +1) const;

  /// b a b^-1 for a kernel word and a quotient word.
  Word conjugate_kernel(const Word& qword, const Word& kword) const;

  PfElement multiply(const PfElement& g, const PfElement& h) const;
  PfElement invert(const PfElement& g) const;
  PfElement conjugate(const PfElement& g, const PfElement& h) const;  // g h g^-1
  PfElement power(const PfElement& g, long long n) const;

 private:
  PfGroup(int r, int s, std::vector<QuotientAction> actions);
  int kernel_rank_, quotient_rank_;
  std::vector<QuotientAction> actions_;
};

/// Morphism of a PfGroup given by the images of all generators; kernel
/// generators first. An inverse, when present, has the same shape and is
/// checked by two-sided composition.
struct PfMorphism {
  std::vector<PfElement> kernel_images;
  std::vector<PfElement> quotient_images;
  std::optional<std::vector<PfElement>> inverse_kernel_images;
  std::optional<std::vector<PfElement>> inverse_quotient_images;

  static PfMorphism identity(const PfGroup& g);
  bool has_inverse() const { return inverse_kernel_images.has_value(); }
  PfMorphism inverse_morphism() const;
};

PfElement pf_apply(const PfGroup& g, const PfMorphism& f, const PfElement& e);
PfMorphism pf_compose(const PfGroup& g, const PfMorphism& f1, const PfMorphism& f2);

/// Relator check: f(b) f(a) f(b)^-1 = f(b a b^-1) for every kernel
/// generator a and quotient generator b.
bool verify_endomorphism(const PfGroup& g, const PfMorphism& f);

/// Checks both compositions with the stored inverse fix all generators.
bool verify_automorphism(const PfGroup& g, const PfMorphism& f);

/// f(F_r) inside F_r: every kernel image has trivial quotient part.
bool preserves_series(const PfGroup& g, const PfMorphism& f);

/// Breadth-first ball of normal forms, deterministic order. Throws
/// ResourceCapError beyond the documented caps.
std::vector<PfElement> ball_enumerate(const PfGroup& g, int radius,
                                      size_t max_elements = 1000000);
constexpr int kBallRadiusCap = 8;

// --- centralizer descriptors ---------------------------------------------

/// Explicit form of the centralizer of an element, following the direct
/// product and Z x| F_s case analyses. KernelTimesCentralizer covers both
/// mixed direct-product cases; which side is cyclic is determined by which
/// root payload is present. The squares variant marks the index-2
/// phenomenon in Z x| F_s; its `twisted_offset` payload is set in the
/// subcase where the commuting quotient powers alternate with a forced
/// kernel coordinate (see contains()).
struct SubgroupDescriptor {
  enum class Tag {
    WholeGroup,
    KernelTimesCentralizer,
    CentralizerPair,
    ZCrossKernelPrime,
    CentralizerOnly,
    ZCrossCentralizer,
    ZCrossCentralizerSquares,
  };
  Tag tag;
  std::optional<Word> kernel_root;    // primitive
  std::optional<Word> quotient_root;  // primitive
  std::optional<long long> twisted_offset;
  bool interpretation_dependent = false;
  std::string note;

  bool contains(const PfGroup& g, const PfElement& e) const;
  std::string tag_name() const;
};

/// Centralizer in F_r x F_s (identity actions required).
SubgroupDescriptor centralizer_direct_product(const PfGroup& g, const PfElement& e);

/// Centralizer in Z x| F_s with a nontrivial sign action. The sign of a
/// quotient word is the product of the generator signs it hits; its kernel
/// F_s' has index 2.
SubgroupDescriptor centralizer_z_semidirect(const PfGroup& g, const PfElement& e);
int quotient_sign(const PfGroup& g, const Word& qword);

// --- abelian invariants of the group -------------------------------------

/// Abelianization of F_r x| Z as Z + coker(1 - phi(t)^ab); the extra Z
/// summand is implicit and recorded by the caller.
struct FreeByCyclicAbelianization {
  AbelianGroupStructure coker;  // the non-Z part plus any extra free rank
};
FreeByCyclicAbelianization abelianization_free_by_cyclic(const PfGroup& g);

struct PolyfreeSeries {
  std::vector<long long> ranks;
};

/// Length, Euler characteristic (product of rank-1 values) and the
/// series-count bound (c+1)^((k-1)c + k^2 - 1), defined only when c != 0.
struct EulerData {
  long long length = 0;
  long long characteristic = 0;
  bool bound_applicable = false;
  BigUint bound;
};
EulerData euler_data(const PolyfreeSeries& series);

/// Generator names used by reports and the CLI. Defaults: kernel a, b,
/// c, ...; quotient t when s = 1, else u, v, w, ...; the canonical
/// mapping torus uses x, y, t.
struct GroupNaming {
  Alphabet kernel;
  Alphabet quotient;
};
GroupNaming default_naming(const PfGroup& g);
std::string format_element(const GroupNaming& naming, const PfElement& e);

/// For G = F_r x| Z whose t-action is conjugation by w (in the sense
/// phi(t): a -> w^-1 a w, which is what makes the construction central),
/// returns the central element (w, t^-1) together with the performed
/// checks: commutation with every generator and <w t^-1> meeting F_r
/// trivially (t-exponent count).
struct CenterReport {
  PfElement center;
  std::vector<std::string> checks;
};
CenterReport center_conjugation_case(const PfGroup& g, const Word& w);

}  // namespace polyfree

#endif  // POLYFREE_PFGROUP_HPP_
