#include "polyfree/word.hpp"

#include <algorithm>
#include <sstream>

#include "polyfree/matrix.hpp"

namespace polyfree {

namespace {

void check_rank(int rank) {
  if (rank < 1) throw std::invalid_argument("rank must be positive");
}

void push_reduced(std::vector<Letter>& out, Letter l) {
  if (!out.empty() && out.back().gen == l.gen && out.back().sign == -l.sign)
    out.pop_back();
  else
    out.push_back(l);
}

}  // namespace

Word::Word(int rank) : rank_(rank) { check_rank(rank); }

Word::Word(int rank, std::vector<Letter> raw) : rank_(rank) {
  check_rank(rank);
  letters_.reserve(raw.size());
  for (Letter l : raw) {
    if (l.gen < 0 || l.gen >= rank)
      throw std::out_of_range("generator index out of range for rank " + std::to_string(rank));
    if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("letter sign must be +1 or -1");
    push_reduced(letters_, l);
  }
}

Word Word::generator(int rank, int gen, int sign) {
  return Word(rank, {Letter{gen, sign}});
}

Word Word::power(int rank, int gen, long long exponent) {
  std::vector<Letter> raw;
  int sign = exponent >= 0 ? 1 : -1;
  long long n = exponent >= 0 ? exponent : -exponent;
  raw.assign(static_cast<size_t>(n), Letter{gen, sign});
  return Word(rank, std::move(raw));
}

bool Word::operator<(const Word& o) const {
  if (length() != o.length()) return length() < o.length();
  for (size_t i = 0; i < length(); ++i) {
    const Letter &a = letters_[i], &b = o.letters_[i];
    if (a.gen != b.gen) return a.gen < b.gen;
    if (a.sign != b.sign) return a.sign > b.sign;  // positive letter first
  }
  return false;
}

std::string Word::key() const {
  std::string k;
  k.reserve(letters_.size() * 2);
  for (Letter l : letters_) {
    k.push_back(static_cast<char>('a' + l.gen % 26));
    k.push_back(l.sign > 0 ? '+' : '-');
    if (l.gen >= 26) k += std::to_string(l.gen);
  }
  return k;
}

Word operator*(const Word& u, const Word& v) {
  if (u.rank() != v.rank()) throw std::invalid_argument("word rank mismatch");
  std::vector<Letter> raw = u.letters();
  raw.insert(raw.end(), v.letters().begin(), v.letters().end());
  return Word(u.rank(), std::move(raw));
}

Word inverse(const Word& u) {
  std::vector<Letter> raw;
  raw.reserve(u.length());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it)
    raw.push_back(it->inverse());
  return Word(u.rank(), std::move(raw));
}

Word pow(const Word& u, long long n) {
  Word base = n < 0 ? inverse(u) : u;
  long long reps = n < 0 ? -n : n;
  Word out(u.rank());
  for (long long i = 0; i < reps; ++i) out = out * base;
  return out;
}

CyclicForm cyclic_reduce(const Word& w) {
  const auto& ls = w.letters();
  size_t lo = 0, hi = ls.size();
  while (hi - lo >= 2 && ls[lo] == ls[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  Word core(w.rank(), std::vector<Letter>(ls.begin() + lo, ls.begin() + hi));
  Word conj(w.rank(), std::vector<Letter>(ls.begin(), ls.begin() + lo));
  return {core, conj};
}

RootPower primitive_root(const Word& w) {
  if (w.is_identity()) return {Word(w.rank()), 0};
  CyclicForm cf = cyclic_reduce(w);
  const auto& ls = cf.core.letters();
  const size_t n = ls.size();
  // smallest period p of the core with core == (prefix p)^(n/p)
  size_t period = n;
  for (size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (size_t i = p; i < n && ok; ++i) ok = ls[i] == ls[i - p];
    if (ok) {
      period = p;
      break;
    }
  }
  Word root_core(w.rank(), std::vector<Letter>(ls.begin(), ls.begin() + period));
  Word root = cf.conjugator * root_core * inverse(cf.conjugator);
  return {root, static_cast<long long>(n / period)};
}

bool CentralizerDescriptor::contains(const Word& u) const {
  if (kind == Kind::WholeGroup) return true;
  if (u.is_identity()) return true;
  RootPower rp = primitive_root(u);
  return rp.root == root || rp.root == inverse(root);
}

CentralizerDescriptor centralizer_free(const Word& w) {
  if (w.is_identity()) return {CentralizerDescriptor::Kind::WholeGroup, Word(w.rank())};
  return {CentralizerDescriptor::Kind::CyclicOnRoot, primitive_root(w).root};
}

long long exponent_sum(const Word& w, int gen) {
  if (gen < 0 || gen >= w.rank()) throw std::out_of_range("generator index out of range");
  long long sum = 0;
  for (Letter l : w.letters())
    if (l.gen == gen) sum = checked_add(sum, l.sign);
  return sum;
}

std::vector<Word> word_ball(int rank, int radius) {
  check_rank(rank);
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
  std::vector<Word> out{Word(rank)};
  size_t layer_begin = 0;
  for (int step = 0; step < radius; ++step) {
    size_t layer_end = out.size();
    for (size_t i = layer_begin; i < layer_end; ++i) {
      for (int g = 0; g < rank; ++g)
        for (int sign : {+1, -1}) {
          // extend on the right without cancellation: each layer holds
          // exactly the words of that length
          const Word& base = out[i];
          if (!base.letters().empty()) {
            Letter last = base.letters().back();
            if (last.gen == g && last.sign == -sign) continue;
          }
          out.push_back(base * Word::generator(rank, g, sign));
        }
    }
    std::sort(out.begin() + layer_end, out.end());
    layer_begin = layer_end;
  }
  return out;
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw std::invalid_argument("alphabet must be nonempty");
  for (const auto& n : names_)
    if (n.empty() || n == "1" || n.find_first_of(" \t^\",;:") != std::string::npos)
      throw std::invalid_argument("bad generator name: '" + n + "'");
}

Alphabet Alphabet::consecutive(int rank, char start) {
  std::vector<std::string> names;
  for (int i = 0; i < rank; ++i) names.push_back(std::string(1, static_cast<char>(start + i)));
  return Alphabet(std::move(names));
}

int Alphabet::index_of(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

Word parse_word(const Alphabet& alphabet, std::string_view text) {
  std::vector<Letter> raw;
  std::istringstream in{std::string(text)};
  std::string token;
  size_t pos = 0;
  while (in >> token) {
    ++pos;
    if (token == "1") continue;
    std::string name = token;
    long long exponent = 1;
    if (auto caret = token.find('^'); caret != std::string::npos) {
      name = token.substr(0, caret);
      std::string exp_text = token.substr(caret + 1);
      try {
        size_t used = 0;
        exponent = std::stoll(exp_text, &used);
        if (used != exp_text.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw WordParseError("bad exponent '" + exp_text + "'", pos);
      }
    }
    int gen = alphabet.index_of(name);
    if (gen < 0) throw WordParseError("unknown generator '" + name + "'", pos);
    int sign = exponent >= 0 ? 1 : -1;
    for (long long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i)
      raw.push_back(Letter{gen, sign});
  }
  return Word(alphabet.rank(), std::move(raw));
}

std::string format_word(const Alphabet& alphabet, const Word& w) {
  if (w.is_identity()) return "1";
  std::string out;
  size_t i = 0;
  const auto& ls = w.letters();
  while (i < ls.size()) {
    size_t j = i;
    while (j < ls.size() && ls[j] == ls[i]) ++j;
    long long run = static_cast<long long>(j - i) * ls[i].sign;
    if (!out.empty()) out += ' ';
    out += alphabet.name(ls[i].gen);
    if (run != 1) out += "^" + std::to_string(run);
    i = j;
  }
  return out;
}

}  // namespace polyfree
