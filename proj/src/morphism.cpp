#include "polyfree/morphism.hpp"

#include <algorithm>
#include <array>

namespace polyfree {

FreeMorphism::FreeMorphism(int domain_rank, int codomain_rank, std::vector<Word> images)
    : domain_rank_(domain_rank), codomain_rank_(codomain_rank), images_(std::move(images)) {
  if (domain_rank < 1 || codomain_rank < 1)
    throw std::invalid_argument("morphism ranks must be positive");
  if (images_.size() != static_cast<size_t>(domain_rank))
    throw std::invalid_argument("one image per domain generator required");
  for (const Word& w : images_)
    if (w.rank() != codomain_rank)
      throw std::invalid_argument("image word rank does not match codomain");
}

FreeMorphism FreeMorphism::identity(int rank) {
  std::vector<Word> images;
  for (int i = 0; i < rank; ++i) images.push_back(Word::generator(rank, i));
  return FreeMorphism(rank, rank, std::move(images));
}

FreeMorphism FreeMorphism::inner(int rank, const Word& w) {
  if (w.rank() != rank) throw std::invalid_argument("conjugator rank mismatch");
  std::vector<Word> images;
  for (int i = 0; i < rank; ++i)
    images.push_back(w * Word::generator(rank, i) * inverse(w));
  return FreeMorphism(rank, rank, std::move(images));
}

Word FreeMorphism::apply(const Word& w) const {
  if (w.rank() != domain_rank_) throw std::invalid_argument("word rank mismatch");
  Word out(codomain_rank_);
  for (Letter l : w.letters())
    out = out * (l.sign > 0 ? images_[l.gen] : inverse(images_[l.gen]));
  return out;
}

FreeMorphism compose(const FreeMorphism& f, const FreeMorphism& g) {
  if (f.domain_rank() != g.codomain_rank())
    throw std::invalid_argument("morphism ranks do not compose");
  std::vector<Word> images;
  for (int i = 0; i < g.domain_rank(); ++i) images.push_back(f.apply(g.image(i)));
  return FreeMorphism(g.domain_rank(), f.codomain_rank(), std::move(images));
}

FreeMorphism pow(const FreeMorphism& f, long long n, const FreeMorphism* inv) {
  if (f.domain_rank() != f.codomain_rank())
    throw std::invalid_argument("powers need an endomorphism");
  if (n < 0 && inv == nullptr) throw std::invalid_argument("negative power needs the inverse");
  const FreeMorphism& base = n < 0 ? *inv : f;
  long long reps = n < 0 ? -n : n;
  FreeMorphism out = FreeMorphism::identity(f.domain_rank());
  for (long long i = 0; i < reps; ++i) out = compose(base, out);
  return out;
}

IntMatrix abelianized_matrix(const FreeMorphism& f) {
  IntMatrix m(f.domain_rank(), f.codomain_rank());
  for (int i = 0; i < f.domain_rank(); ++i)
    for (int j = 0; j < f.codomain_rank(); ++j) m.at(i, j) = exponent_sum(f.image(i), j);
  return m;
}

namespace {

// The eight elementary Nielsen moves on an image pair (u, v), as
// right-composition factors, paired with their inverses.
struct NielsenMove {
  FreeMorphism n;
  FreeMorphism n_inv;
};

std::vector<NielsenMove> elementary_moves() {
  const int r = 2;
  auto x = Word::generator(r, 0);
  auto y = Word::generator(r, 1);
  auto mk = [&](const Word& xi, const Word& yi) {
    return FreeMorphism(r, r, {xi, yi});
  };
  std::vector<NielsenMove> moves;
  moves.push_back({mk(x * y, y), mk(x * inverse(y), y)});            // u <- u v
  moves.push_back({mk(x * inverse(y), y), mk(x * y, y)});            // u <- u v^-1
  moves.push_back({mk(y * x, y), mk(inverse(y) * x, y)});            // u <- v u
  moves.push_back({mk(inverse(y) * x, y), mk(y * x, y)});            // u <- v^-1 u
  moves.push_back({mk(x, y * x), mk(x, y * inverse(x))});            // v <- v u
  moves.push_back({mk(x, y * inverse(x)), mk(x, y * x)});            // v <- v u^-1
  moves.push_back({mk(x, x * y), mk(x, inverse(x) * y)});            // v <- u v
  moves.push_back({mk(x, inverse(x) * y), mk(x, x * y)});            // v <- u^-1 v
  return moves;
}

size_t pair_length(const FreeMorphism& f) {
  return f.image(0).length() + f.image(1).length();
}

// Signed basis permutations of F2: the candidates once reduction stops.
std::optional<FreeMorphism> signed_basis_inverse(const FreeMorphism& f) {
  const Word &u = f.image(0), &v = f.image(1);
  if (u.length() != 1 || v.length() != 1) return std::nullopt;
  Letter a = u.letters()[0], b = v.letters()[0];
  if (a.gen == b.gen) return std::nullopt;
  // inverse sends generator a.gen back to x^(a.sign), b.gen to y^(b.sign)
  std::vector<Word> inv_images(2, Word(2));
  inv_images[a.gen] = Word::generator(2, 0, a.sign);
  inv_images[b.gen] = Word::generator(2, 1, b.sign);
  return FreeMorphism(2, 2, std::move(inv_images));
}

bool verified_two_sided(const FreeMorphism& f, const FreeMorphism& g) {
  return compose(f, g) == FreeMorphism::identity(2) &&
         compose(g, f) == FreeMorphism::identity(2);
}

}  // namespace

Rank2Recognition recognize_rank2_automorphism(const FreeMorphism& f) {
  if (f.domain_rank() != 2 || f.codomain_rank() != 2)
    throw std::invalid_argument("rank-2 recognition needs an endomorphism of F2");

  long long det = determinant(abelianized_matrix(f));
  if (det != 1 && det != -1) return {};

  static const std::vector<NielsenMove> moves = elementary_moves();

  FreeMorphism current = f;
  FreeMorphism inv = FreeMorphism::identity(2);  // accumulates N1 .. Nk
  for (;;) {
    bool reduced = false;
    for (const NielsenMove& mv : moves) {
      FreeMorphism next = compose(current, mv.n);
      if (pair_length(next) < pair_length(current)) {
        current = next;
        inv = compose(inv, mv.n);  // f = current o mv.n_inv o ... ; f^-1 = inv o current^-1
        reduced = true;
        break;
      }
    }
    if (reduced) continue;

    if (auto tail = signed_basis_inverse(current)) {
      FreeMorphism full_inverse = compose(inv, *tail);
      if (!verified_two_sided(f, full_inverse))
        throw std::logic_error("Nielsen reduction produced an unverified inverse");
      return {true, full_inverse};
    }

    // Plateau: no strictly reducing single move. Search a bounded number
    // of equal-length moves for a path to a strict reduction.
    struct State {
      FreeMorphism current, inv;
    };
    std::vector<State> frontier{{current, inv}};
    std::vector<std::string> seen{current.image(0).key() + "|" + current.image(1).key()};
    bool escaped = false;
    for (int depth = 0; depth < 4 && !escaped && !frontier.empty(); ++depth) {
      std::vector<State> next_frontier;
      for (const State& st : frontier) {
        for (const NielsenMove& mv : moves) {
          FreeMorphism cand = compose(st.current, mv.n);
          size_t len = pair_length(cand);
          if (len < pair_length(current)) {
            current = cand;
            inv = compose(st.inv, mv.n);
            escaped = true;
            break;
          }
          if (len == pair_length(current)) {
            std::string k = cand.image(0).key() + "|" + cand.image(1).key();
            if (std::find(seen.begin(), seen.end(), k) == seen.end()) {
              seen.push_back(k);
              next_frontier.push_back({cand, compose(st.inv, mv.n)});
            }
          }
        }
        if (escaped) break;
      }
      frontier = std::move(next_frontier);
    }
    if (!escaped) return {};
  }
}

std::optional<Word> find_inner_witness(const FreeMorphism& f, size_t max_length) {
  if (f.domain_rank() != 2 || f.codomain_rank() != 2)
    throw std::invalid_argument("inner witness search is for endomorphisms of F2");
  const Word x = Word::generator(2, 0);
  const Word y = Word::generator(2, 1);

  // If f = conj by w then f(x) = w x w^-1, so the cyclically reduced core
  // of f(x) must be x and w lies in (outer conjugator) * <x>.
  CyclicForm cf = cyclic_reduce(f.apply(x));
  if (cf.core != x) return std::nullopt;
  Word z = inverse(cf.conjugator) * f.apply(y) * cf.conjugator;
  // need z == x^j y x^-j exactly
  long long j = 0;
  {
    const auto& ls = z.letters();
    size_t i = 0;
    while (i < ls.size() && ls[i].gen == 0) ++i;
    if (i >= ls.size() || ls[i].gen != 1 || ls[i].sign != 1) return std::nullopt;
    for (size_t p = 0; p < i; ++p) j += ls[p].sign;
    if (z != Word::power(2, 0, j) * y * Word::power(2, 0, -j)) return std::nullopt;
  }
  Word w = cf.conjugator * Word::power(2, 0, j);
  if (w.length() > max_length) return std::nullopt;
  if (f.apply(x) != w * x * inverse(w) || f.apply(y) != w * y * inverse(w))
    return std::nullopt;
  return w;
}

}  // namespace polyfree
