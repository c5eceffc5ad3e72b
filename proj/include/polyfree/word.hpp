#ifndef POLYFREE_WORD_HPP_
#define POLYFREE_WORD_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polyfree {

struct Letter {
  int gen;   // 0-based generator index
  int sign;  // +1 or -1

  bool operator==(const Letter& o) const { return gen == o.gen && sign == o.sign; }
  bool operator!=(const Letter& o) const { return !(*this == o); }
  Letter inverse() const { return {gen, -sign}; }
};

/// Freely reduced word in a free group of finite rank. Every constructor
/// reduces, so instances are always in normal form; the empty word is the
/// identity.
class Word {
 public:
  explicit Word(int rank);
  Word(int rank, std::vector<Letter> raw);  // free reduction applied

  static Word generator(int rank, int gen, int sign = +1);
  static Word power(int rank, int gen, long long exponent);

  int rank() const { return rank_; }
  size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }

  bool operator==(const Word& o) const { return rank_ == o.rank_ && letters_ == o.letters_; }
  bool operator!=(const Word& o) const { return !(*this == o); }
  bool operator<(const Word& o) const;  // shortlex, for deterministic orderings

  /// Compact canonical key, usable as a hash-map key.
  std::string key() const;

 private:
  int rank_;
  std::vector<Letter> letters_;
};

Word operator*(const Word& u, const Word& v);
Word inverse(const Word& u);
Word pow(const Word& u, long long n);

/// w = conjugator * core * conjugator^-1 with core cyclically reduced.
struct CyclicForm {
  Word core;
  Word conjugator;
};
CyclicForm cyclic_reduce(const Word& w);

/// w = root^exponent with root not a proper power. The identity yields
/// (empty, 0); otherwise exponent >= 1.
struct RootPower {
  Word root;
  long long exponent;
};
RootPower primitive_root(const Word& w);

struct CentralizerDescriptor {
  enum class Kind { WholeGroup, CyclicOnRoot };
  Kind kind;
  Word root;  // primitive; meaningful only for CyclicOnRoot

  bool contains(const Word& u) const;
};
CentralizerDescriptor centralizer_free(const Word& w);

long long exponent_sum(const Word& w, int gen);

/// All freely reduced words of length <= radius, breadth-first, shortlex
/// within each layer. Deterministic.
std::vector<Word> word_ball(int rank, int radius);

// --- word literal syntax -------------------------------------------------
//
// Whitespace-separated tokens over a declared alphabet; '^-1' marks an
// inverse and '^n' a power, e.g. "x y^-1 x^2". "1" denotes the identity.

struct WordParseError : std::runtime_error {
  WordParseError(const std::string& msg, size_t token_position)
      : std::runtime_error(msg + " (token " + std::to_string(token_position) + ")"),
        position(token_position) {}
  size_t position;
};

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  /// Default generator names: rank letters starting at 'start'.
  static Alphabet consecutive(int rank, char start);

  int rank() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_.at(i); }
  int index_of(std::string_view name) const;  // -1 if unknown

 private:
  std::vector<std::string> names_;
};

Word parse_word(const Alphabet& alphabet, std::string_view text);
std::string format_word(const Alphabet& alphabet, const Word& w);

}  // namespace polyfree

#endif  // POLYFREE_WORD_HPP_
