#ifndef POLYFREE_MORPHISM_HPP_
#define POLYFREE_MORPHISM_HPP_

#include <optional>
#include <vector>

#include "polyfree/matrix.hpp"
#include "polyfree/word.hpp"

namespace polyfree {

/// Homomorphism between free groups, given by one image word per domain
/// generator. Composition is on the left everywhere: compose(f, g) maps
/// w to f(g(w)).
class FreeMorphism {
 public:
  FreeMorphism(int domain_rank, int codomain_rank, std::vector<Word> images);

  static FreeMorphism identity(int rank);
  /// w g w^-1 on every generator.
  static FreeMorphism inner(int rank, const Word& w);

  int domain_rank() const { return domain_rank_; }
  int codomain_rank() const { return codomain_rank_; }
  const Word& image(int gen) const { return images_.at(gen); }
  const std::vector<Word>& images() const { return images_; }

  Word apply(const Word& w) const;

  bool operator==(const FreeMorphism& o) const {
    return domain_rank_ == o.domain_rank_ && codomain_rank_ == o.codomain_rank_ &&
           images_ == o.images_;
  }

 private:
  int domain_rank_, codomain_rank_;
  std::vector<Word> images_;
};

FreeMorphism compose(const FreeMorphism& f, const FreeMorphism& g);
FreeMorphism pow(const FreeMorphism& f, long long n,
                 const FreeMorphism* inverse = nullptr);

/// Row i = exponent-sum vector of the image of generator i (row form).
IntMatrix abelianized_matrix(const FreeMorphism& f);

/// Nielsen length reduction on the image pair decides whether an
/// endomorphism of F2 is an automorphism and, if so, produces the inverse
/// (verified by two-sided composition). Ties between reducing moves are
/// broken by a fixed move order, so the run is deterministic.
struct Rank2Recognition {
  bool is_automorphism = false;
  std::optional<FreeMorphism> inverse;
};
Rank2Recognition recognize_rank2_automorphism(const FreeMorphism& f);

/// Searches for w with f(g) = w g w^-1 on both generators of F2; the
/// candidate is derived exactly (conjugacy root of f(x), then the power
/// of x fixed by matching f(y)), so the length bound only rejects, never
/// truncates the search.
std::optional<Word> find_inner_witness(const FreeMorphism& f, size_t max_length = 64);

}  // namespace polyfree

#endif  // POLYFREE_MORPHISM_HPP_
