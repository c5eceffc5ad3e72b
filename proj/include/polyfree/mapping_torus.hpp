#ifndef POLYFREE_MAPPING_TORUS_HPP_
#define POLYFREE_MAPPING_TORUS_HPP_

#include <optional>
#include <string>

#include "polyfree/pfgroup.hpp"

namespace polyfree {

/// The canonical rank-2 mapping torus <x,y,t | t^-1 x t = x y^k,
/// t^-1 y t = y>, built on PfGroup arithmetic; every element normalizes
/// to (word in x,y) * t^n by pushing t-letters rightward through the
/// inverse twist.
class MappingTorus {
 public:
  static MappingTorus make(long long k);

  /// Recognizes a PfGroup that is exactly this presentation (r = 2,
  /// s = 1, twist x -> x y^k with k != 0, y fixed).
  static std::optional<MappingTorus> recognize(const PfGroup& g);

  long long k() const { return k_; }
  const PfGroup& group() const { return group_; }

 private:
  MappingTorus(long long k, PfGroup g) : k_(k), group_(std::move(g)) {}
  long long k_;
  PfGroup group_;
};

/// Classification of a GL2(Z) matrix by the five mapping-torus outer
/// automorphism cases; total, and single-valued by construction.
enum class TorusMatrixClass {
  Identity,                    // i
  MinusIdentity,               // ii
  NoEigenvalueOne,             // iii
  DetMinusOneEigenvalueOne,    // iv
  UnipotentNonidentity,        // v
};

TorusMatrixClass classify_gl2_torus(const IntMatrix& m);  // requires det = +-1
std::string torus_class_name(TorusMatrixClass c);

/// The generator automorphisms of Aut(M_phi): conjugation gamma_g plus
/// the four standard maps
///   Psi: x -> tx            Omega: y -> y^-1, t -> t^-1
///   Delta: x -> x^-1, y -> y^-1, t -> t y^-k     Xi: x -> xy
/// used to realize the classified forms a)-d).
PfMorphism torus_psi(const MappingTorus& t);
PfMorphism torus_omega(const MappingTorus& t);
PfMorphism torus_delta(const MappingTorus& t);
PfMorphism torus_xi(const MappingTorus& t);
PfMorphism torus_inner(const MappingTorus& t, const PfElement& g);

enum class FamilyForm { A, B, C, D };
FamilyForm parse_family_form(const std::string& s);
std::string family_form_name(FamilyForm f);

/// Automorphism Psi^-m gamma_g^-1 [Omega] [Delta] Xi^i (rightmost factor
/// applied first; Omega enters for forms b and d, Delta for c and d).
/// Without a conjugator the realized images are checked against the
/// closed forms
///   a) x -> t^-m x y^i           y -> y      t -> t
///   b) x -> t^-m x y^-i          y -> y^-1   t -> t^-1
///   c) x -> x^-1 t^m y^-i        y -> y^-1   t -> t y^-k
///   d) x -> x^-1 t^m y^i         y -> y      t -> t^-1 y^k
/// and construction fails loudly on any mismatch or relator failure.
struct FamilyAutomorphism {
  FamilyForm form;
  long long m = 0;
  long long i = 0;
  std::optional<PfElement> conjugator;
  PfMorphism morphism;
};

FamilyAutomorphism family_automorphism(const MappingTorus& t, FamilyForm form,
                                       long long m, long long i,
                                       std::optional<PfElement> conjugator = {});

/// 2x2 matrix of the map induced on the free-abelian quotient (x,t)
/// exponents; row 0 is the image of x, row 1 the image of t. Requires
/// the morphism to kill y in the quotient (y-image with zero x- and
/// t-exponent sums).
IntMatrix induced_quotient_matrix(const MappingTorus& t, const PfMorphism& f);

/// Membership in H, the normal closure of y: zero t-exponent and zero
/// x-exponent sum.
bool kernel_membership(const MappingTorus& t, const PfElement& e);

/// Class of a kernel element in H^ab with basis e_i = class of x^i y x^-i:
/// scan the word keeping the running x-exponent p and emit +-e_p per
/// y-letter.
SupportedVector rs_rewrite(const MappingTorus& t, const PfElement& e);

/// Class of f(x^index y x^-index) in H^ab.
SupportedVector eta_ab_image(const MappingTorus& t, const PfMorphism& f, long long index);

}  // namespace polyfree

#endif  // POLYFREE_MAPPING_TORUS_HPP_
