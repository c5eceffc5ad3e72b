#include "polyfree/job.hpp"

#include <algorithm>
#include <sstream>

namespace polyfree {

namespace {

struct Token {
  std::string text;
  bool quoted = false;
};

std::vector<Token> tokenize(const std::string& line, size_t line_no) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (c == '"') {
      size_t end = line.find('"', i + 1);
      if (end == std::string::npos) throw JobParseError(line_no, "unterminated quote");
      out.push_back({line.substr(i + 1, end - i - 1), true});
      i = end + 1;
      continue;
    }
    if (c == ',' || c == ':') {
      out.push_back({std::string(1, c), false});
      ++i;
      continue;
    }
    size_t end = i;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end])) &&
           line[end] != ',' && line[end] != ':' && line[end] != '"' && line[end] != '#')
      ++end;
    out.push_back({line.substr(i, end - i), false});
    i = end;
  }
  return out;
}

long long parse_int(const std::string& s, size_t line_no, const std::string& what) {
  try {
    size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw JobParseError(line_no, "bad integer for " + what + ": '" + s + "'");
  }
}

// "key=value" split; returns empty key when there is no '='
std::pair<std::string, std::string> key_value(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos) return {"", s};
  return {s.substr(0, eq), s.substr(eq + 1)};
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ','))
    if (!part.empty()) out.push_back(part);
  return out;
}

// One "gen -> "word"" clause list: gen -> image, gen -> image, ...
std::vector<std::pair<std::string, std::string>> parse_arrow_clauses(
    const std::vector<Token>& toks, size_t from, size_t line_no) {
  std::vector<std::pair<std::string, std::string>> out;
  size_t i = from;
  while (i < toks.size()) {
    if (i + 2 >= toks.size() || toks[i + 1].text != "->" || !toks[i + 2].quoted)
      throw JobParseError(line_no, "expected: generator -> \"word\"");
    out.push_back({toks[i].text, toks[i + 2].text});
    i += 3;
    if (i < toks.size()) {
      if (toks[i].text != ",") throw JobParseError(line_no, "expected ',' between images");
      ++i;
    }
  }
  if (out.empty()) throw JobParseError(line_no, "expected at least one image");
  return out;
}

struct RawCommand {
  std::string name;
  std::vector<Token> args;
  size_t line_no;
};

struct GroupSpec {
  std::string kind;  // direct | semidirect | mapping_torus
  int r = 0, s = 0;
  long long k = 0;
  size_t line_no = 0;
};

struct ActionClause {
  std::string qgen;
  std::vector<std::pair<std::string, std::string>> images;
  size_t line_no;
};

class JobBuilder {
 public:
  void parse(const std::string& text) {
    std::stringstream in(text);
    std::string line;
    size_t line_no = 0;
    bool saw_statement = false;
    while (std::getline(in, line)) {
      ++line_no;
      auto toks = tokenize(line, line_no);
      if (toks.empty()) continue;
      saw_statement = true;
      const std::string& head = toks[0].text;
      if (head == "group")
        parse_group(toks, line_no);
      else if (head == "alphabet")
        parse_alphabet(toks, line_no);
      else if (head == "action" || head == "inverse")
        parse_action(toks, line_no, head == "inverse");
      else if (head == "morphism" || head == "inverse_morphism")
        parse_morphism_line(toks, line_no, head == "inverse_morphism");
      else if (head == "family")
        parse_family(toks, line_no);
      else if (head == "options")
        parse_options(toks, line_no);
      else if (head == "command")
        parse_command(toks, line_no);
      else
        throw JobParseError(line_no, "unknown statement '" + head + "'");
    }
    if (!saw_statement) throw JobParseError(line_no == 0 ? 1 : line_no, "empty job");
    finalize();
  }

  // filled by parse()
  struct NamedMorphism {
    PfMorphism morphism;
    std::string note;                    // e.g. family description
    std::optional<std::string> invalid;  // relator failure, reported by verify
  };
  std::optional<GroupSpec> group_spec;
  std::optional<PfGroup> group;
  std::optional<MappingTorus> torus;
  GroupNaming naming{Alphabet({"a"}), Alphabet({"t"})};
  std::map<std::string, NamedMorphism> morphisms;
  std::vector<RawCommand> commands;
  JobOptions options;

 private:
  std::optional<Alphabet> kernel_names_, quotient_names_;
  std::vector<ActionClause> actions_, inverses_;
  struct RawMorphism {
    std::vector<std::pair<std::string, std::string>> images;
    size_t line_no;
  };
  std::map<std::string, RawMorphism> raw_morphisms_, raw_inverses_;
  struct RawFamily {
    std::string form;
    long long m = 0, i = 0;
    std::optional<std::string> g;
    size_t line_no;
  };
  std::map<std::string, RawFamily> raw_families_;

  void parse_group(const std::vector<Token>& toks, size_t line_no) {
    if (group_spec) throw JobParseError(line_no, "only one group block per job");
    GroupSpec spec;
    spec.line_no = line_no;
    for (size_t i = 1; i < toks.size(); ++i) {
      auto [key, value] = key_value(toks[i].text);
      if (key == "kind")
        spec.kind = value;
      else if (key == "r")
        spec.r = static_cast<int>(parse_int(value, line_no, "r"));
      else if (key == "s")
        spec.s = static_cast<int>(parse_int(value, line_no, "s"));
      else if (key == "k")
        spec.k = parse_int(value, line_no, "k");
      else
        throw JobParseError(line_no, "unknown group parameter '" + toks[i].text + "'");
    }
    if (spec.kind != "direct" && spec.kind != "semidirect" && spec.kind != "mapping_torus")
      throw JobParseError(line_no, "kind must be direct, semidirect or mapping_torus");
    if (spec.kind == "mapping_torus") {
      if (spec.k == 0) throw JobParseError(line_no, "mapping_torus requires k != 0");
    } else if (spec.r < 1 || spec.s < 1) {
      throw JobParseError(line_no, "group requires r >= 1 and s >= 1");
    }
    group_spec = spec;
  }

  void parse_alphabet(const std::vector<Token>& toks, size_t line_no) {
    size_t i = 1;
    while (i < toks.size()) {
      auto [key, value] = key_value(toks[i].text);
      ++i;
      while (i + 1 < toks.size() + 1 && i < toks.size() && toks[i].text == ",") {
        if (i + 1 >= toks.size()) throw JobParseError(line_no, "trailing comma");
        value += "," + toks[i + 1].text;
        i += 2;
      }
      try {
        if (key == "kernel")
          kernel_names_ = Alphabet(split_names(value));
        else if (key == "quotient")
          quotient_names_ = Alphabet(split_names(value));
        else
          throw JobParseError(line_no, "unknown alphabet side '" + key + "'");
      } catch (const std::invalid_argument& e) {
        throw JobParseError(line_no, e.what());
      }
    }
  }

  void parse_action(const std::vector<Token>& toks, size_t line_no, bool is_inverse) {
    if (toks.size() < 2) throw JobParseError(line_no, "action needs a quotient generator");
    if (toks.size() < 3 || toks[2].text != ":")
      throw JobParseError(line_no, "expected ':' after the quotient generator");
    ActionClause clause{toks[1].text, parse_arrow_clauses(toks, 3, line_no), line_no};
    (is_inverse ? inverses_ : actions_).push_back(std::move(clause));
  }

  void parse_morphism_line(const std::vector<Token>& toks, size_t line_no, bool is_inverse) {
    if (toks.size() < 2) throw JobParseError(line_no, "morphism needs a name");
    if (toks.size() < 3 || toks[2].text != ":")
      throw JobParseError(line_no, "expected ':' after the morphism name");
    auto& target = is_inverse ? raw_inverses_ : raw_morphisms_;
    auto [it, inserted] =
        target.insert({toks[1].text, {parse_arrow_clauses(toks, 3, line_no), line_no}});
    if (!inserted) {
      // continuation line: extend the image list
      auto clauses = parse_arrow_clauses(toks, 3, line_no);
      it->second.images.insert(it->second.images.end(), clauses.begin(), clauses.end());
    }
  }

  void parse_family(const std::vector<Token>& toks, size_t line_no) {
    if (toks.size() < 2) throw JobParseError(line_no, "family needs parameters");
    RawFamily fam;
    fam.line_no = line_no;
    // the name is optional: "family form=d m=1 i=0" stores it as "theta"
    std::string name = "theta";
    size_t start = 1;
    if (toks[1].text.find('=') == std::string::npos) {
      name = toks[1].text;
      start = 2;
      if (toks.size() > 2 && toks[2].text == ":") start = 3;
    }
    for (size_t i = start; i < toks.size(); ++i) {
      auto [key, value] = key_value(toks[i].text);
      if (key == "form")
        fam.form = value;
      else if (key == "m")
        fam.m = parse_int(value, line_no, "m");
      else if (key == "i")
        fam.i = parse_int(value, line_no, "i");
      else if (key == "g") {
        if (i + 1 < toks.size() && value.empty() && toks[i + 1].quoted)
          fam.g = toks[++i].text;
        else
          fam.g = value;
      } else
        throw JobParseError(line_no, "unknown family parameter '" + toks[i].text + "'");
    }
    if (fam.form.empty()) throw JobParseError(line_no, "family needs form=a|b|c|d");
    raw_families_[name] = fam;
  }

  void parse_options(const std::vector<Token>& toks, size_t line_no) {
    for (size_t i = 1; i < toks.size(); ++i) {
      auto [key, value] = key_value(toks[i].text);
      if (key == "ball")
        options.ball = static_cast<int>(parse_int(value, line_no, "ball"));
      else if (key == "conj")
        options.conj = static_cast<int>(parse_int(value, line_no, "conj"));
      else if (key == "jobs")
        options.jobs = static_cast<int>(parse_int(value, line_no, "jobs"));
      else
        throw JobParseError(line_no, "unknown option '" + toks[i].text + "'");
    }
  }

  void parse_command(const std::vector<Token>& toks, size_t line_no) {
    if (toks.size() < 2) throw JobParseError(line_no, "command needs a name");
    RawCommand cmd{toks[1].text, {toks.begin() + 2, toks.end()}, line_no};
    commands.push_back(std::move(cmd));
  }

  FreeMorphism action_to_morphism(const ActionClause& clause, int rank) {
    std::vector<Word> images;
    for (int i = 0; i < rank; ++i) images.push_back(Word::generator(rank, i));
    for (const auto& [gen, word_text] : clause.images) {
      int idx = naming.kernel.index_of(gen);
      if (idx < 0)
        throw JobParseError(clause.line_no, "unknown kernel generator '" + gen + "'");
      try {
        images[idx] = parse_word(naming.kernel, word_text);
      } catch (const WordParseError& e) {
        throw JobParseError(clause.line_no, e.what());
      }
    }
    return FreeMorphism(rank, rank, std::move(images));
  }

  PfElement parse_element(const std::string& text, size_t line_no) {
    std::vector<std::string> names;
    for (int i = 0; i < naming.kernel.rank(); ++i) names.push_back(naming.kernel.name(i));
    for (int j = 0; j < naming.quotient.rank(); ++j) names.push_back(naming.quotient.name(j));
    Alphabet combined{names};
    Word mixed(1);
    try {
      mixed = parse_word(combined, text);
    } catch (const WordParseError& e) {
      throw JobParseError(line_no, e.what());
    }
    const int r = naming.kernel.rank();
    PfElement out = group->identity();
    for (Letter l : mixed.letters()) {
      PfElement gen = l.gen < r ? group->kernel_generator(l.gen, l.sign)
                                : group->quotient_generator(l.gen - r, l.sign);
      out = group->multiply(out, gen);
    }
    return out;
  }

  std::optional<std::string> relator_failure(const PfMorphism& f) {
    for (int j = 0; j < group->quotient_rank(); ++j)
      for (int i = 0; i < group->kernel_rank(); ++i) {
        PfElement lhs = group->conjugate(f.quotient_images[j], f.kernel_images[i]);
        Word relator = group->conjugate_kernel(
            Word::generator(group->quotient_rank(), j),
            Word::generator(group->kernel_rank(), i));
        PfElement rhs =
            pf_apply(*group, f, group->element(relator, Word(group->quotient_rank())));
        if (lhs != rhs)
          return "breaks the relator " + naming.quotient.name(j) + " " +
                 naming.kernel.name(i) + " " + naming.quotient.name(j) +
                 "^-1 = " + format_word(naming.kernel, relator);
      }
    return std::nullopt;
  }

  void finalize() {
    const bool needs_group =
        !raw_morphisms_.empty() || !raw_families_.empty() ||
        std::any_of(commands.begin(), commands.end(), [](const RawCommand& c) {
          return c.name != "euler" && c.name != "snf" &&
                 !(c.name == "classify" && !c.args.empty());
        });
    if (!group_spec) {
      if (needs_group) throw JobParseError(1, "job needs a group block");
      return;
    }
    build_group();
    build_morphisms();
  }

  void build_group() {
    const GroupSpec& spec = *group_spec;
    if (spec.kind == "mapping_torus") {
      torus = MappingTorus::make(spec.k);
      group = torus->group();
      naming = {kernel_names_.value_or(Alphabet({"x", "y"})),
                quotient_names_.value_or(Alphabet({"t"}))};
      if (naming.kernel.rank() != 2 || naming.quotient.rank() != 1)
        throw JobParseError(spec.line_no, "mapping torus alphabets must have ranks 2 and 1");
      if (!actions_.empty())
        throw JobParseError(actions_.front().line_no,
                            "mapping_torus fixes its own action; drop the action lines");
      return;
    }

    naming.kernel = kernel_names_.value_or(Alphabet::consecutive(spec.r, 'a'));
    naming.quotient = quotient_names_.value_or(
        spec.s == 1 ? Alphabet({"t"}) : Alphabet::consecutive(spec.s, 'u'));
    if (naming.kernel.rank() != spec.r || naming.quotient.rank() != spec.s)
      throw JobParseError(spec.line_no, "alphabet sizes must match the group ranks");
    for (int i = 0; i < spec.r; ++i)
      if (naming.quotient.index_of(naming.kernel.name(i)) >= 0)
        throw JobParseError(spec.line_no,
                            "kernel and quotient alphabets share '" + naming.kernel.name(i) + "'");

    std::vector<std::pair<FreeMorphism, std::optional<FreeMorphism>>> twists;
    for (int j = 0; j < spec.s; ++j)
      twists.emplace_back(FreeMorphism::identity(spec.r), std::nullopt);
    for (const ActionClause& clause : actions_) {
      int j = naming.quotient.index_of(clause.qgen);
      if (j < 0)
        throw JobParseError(clause.line_no,
                            "unknown quotient generator '" + clause.qgen + "'");
      twists[static_cast<size_t>(j)].first = action_to_morphism(clause, spec.r);
    }
    for (const ActionClause& clause : inverses_) {
      int j = naming.quotient.index_of(clause.qgen);
      if (j < 0)
        throw JobParseError(clause.line_no,
                            "unknown quotient generator '" + clause.qgen + "'");
      twists[static_cast<size_t>(j)].second = action_to_morphism(clause, spec.r);
    }
    if (spec.kind == "direct")
      for (auto& [twist, inv] : twists)
        if (twist != FreeMorphism::identity(spec.r))
          throw JobParseError(spec.line_no, "direct products take no action lines");
    try {
      group = PfGroup::semidirect(spec.r, spec.s, std::move(twists));
    } catch (const std::invalid_argument& e) {
      throw JobParseError(spec.line_no, e.what());
    }
    torus = MappingTorus::recognize(*group);
  }

  void build_morphisms() {
    for (const auto& [name, raw] : raw_morphisms_) {
      PfMorphism f = PfMorphism::identity(*group);
      f.inverse_kernel_images.reset();
      f.inverse_quotient_images.reset();
      assign_images(f, raw, name);
      if (auto it = raw_inverses_.find(name); it != raw_inverses_.end()) {
        PfMorphism inv = PfMorphism::identity(*group);
        assign_images(inv, it->second, name);
        f.inverse_kernel_images = inv.kernel_images;
        f.inverse_quotient_images = inv.quotient_images;
      } else {
        try_derive_inverse(f);
      }
      std::optional<std::string> invalid = relator_failure(f);
      if (!invalid && f.has_inverse() && !verify_automorphism(*group, f))
        throw JobParseError(raw.line_no,
                            "morphism '" + name + "' and its inverse do not compose to the identity");
      morphisms[name] = {std::move(f), "", std::move(invalid)};
    }
    for (const auto& [name, fam] : raw_families_) {
      if (!torus)
        throw JobParseError(fam.line_no, "family automorphisms need a mapping torus group");
      if (morphisms.count(name))
        throw JobParseError(fam.line_no, "name '" + name + "' is already a morphism");
      std::optional<PfElement> g;
      if (fam.g) g = parse_element(*fam.g, fam.line_no);
      try {
        FamilyAutomorphism built =
            family_automorphism(*torus, parse_family_form(fam.form), fam.m, fam.i, g);
        std::string note = "family form=" + fam.form + " m=" + std::to_string(fam.m) +
                           " i=" + std::to_string(fam.i) +
                           (fam.g ? " g=\"" + *fam.g + "\"" : "");
        morphisms[name] = {std::move(built.morphism), std::move(note), std::nullopt};
      } catch (const std::invalid_argument& e) {
        throw JobParseError(fam.line_no, e.what());
      }
    }
  }

  void assign_images(PfMorphism& f, const RawMorphism& raw, const std::string& name) {
    for (const auto& [gen, word_text] : raw.images) {
      PfElement image = parse_element(word_text, raw.line_no);
      int ki = naming.kernel.index_of(gen);
      int qi = naming.quotient.index_of(gen);
      if (ki >= 0)
        f.kernel_images[ki] = image;
      else if (qi >= 0)
        f.quotient_images[qi] = image;
      else
        throw JobParseError(raw.line_no,
                            "morphism '" + name + "': unknown generator '" + gen + "'");
    }
  }

  // Involutions are their own inverses; free abelian groups invert
  // through the adjugate of the exponent matrix.
  void try_derive_inverse(PfMorphism& f) {
    if (verify_endomorphism(*group, f)) {
      PfMorphism sq = pf_compose(*group, f, f);
      PfMorphism id = PfMorphism::identity(*group);
      if (sq.kernel_images == id.kernel_images && sq.quotient_images == id.quotient_images) {
        f.inverse_kernel_images = f.kernel_images;
        f.inverse_quotient_images = f.quotient_images;
        return;
      }
    }
    if (!group->is_direct() || group->kernel_rank() != 1 || group->quotient_rank() != 1)
      return;
    long long a = exponent_sum(f.kernel_images[0].kernel, 0);
    long long b = exponent_sum(f.kernel_images[0].quotient, 0);
    long long c = exponent_sum(f.quotient_images[0].kernel, 0);
    long long d = exponent_sum(f.quotient_images[0].quotient, 0);
    long long det = a * d - b * c;
    if (det != 1 && det != -1) return;
    // inverse matrix (d -b; -c a) / det
    auto elem = [&](long long ke, long long qe) {
      return group->element(Word::power(1, 0, ke), Word::power(1, 0, qe));
    };
    f.inverse_kernel_images = std::vector<PfElement>{elem(d / det, -b / det)};
    f.inverse_quotient_images = std::vector<PfElement>{elem(-c / det, a / det)};
  }
};

// --- command execution ------------------------------------------------------

struct Runner {
  JobBuilder& job;
  Report report;

  void emit(const std::string& line) { report.lines.push_back(line); }

  const JobBuilder::NamedMorphism& named_morphism(const RawCommand& cmd,
                                                  const std::string& name,
                                                  bool allow_invalid = false) {
    auto it = job.morphisms.find(name);
    if (it == job.morphisms.end())
      throw JobParseError(cmd.line_no, "unknown morphism '" + name + "'");
    if (it->second.invalid && !allow_invalid)
      throw JobParseError(cmd.line_no, "morphism '" + name + "' " + *it->second.invalid);
    return it->second;
  }

  std::string arg_text(const RawCommand& cmd, size_t idx, const std::string& what) {
    if (idx >= cmd.args.size())
      throw JobParseError(cmd.line_no, "command " + cmd.name + " needs " + what);
    return cmd.args[idx].text;
  }

  void run(const RawCommand& cmd) {
    emit("command: " + cmd.name + echo_args(cmd));
    if (cmd.name == "euler")
      run_euler(cmd);
    else if (cmd.name == "snf")
      run_snf(cmd);
    else if (cmd.name == "classify")
      run_classify(cmd);
    else if (cmd.name == "verify")
      run_verify(cmd);
    else if (cmd.name == "certify")
      run_certify(cmd);
    else if (cmd.name == "orbits")
      run_orbits(cmd);
    else if (cmd.name == "centralizer")
      run_centralizer(cmd);
    else
      throw JobParseError(cmd.line_no, "unknown command '" + cmd.name + "'");
  }

  std::string echo_args(const RawCommand& cmd) {
    std::string out;
    for (const Token& t : cmd.args) {
      if (t.text == "," && !t.quoted) {
        out += ",";
        continue;
      }
      if (!out.empty() && out.back() != ',') out += " ";
      if (out.empty()) out += " ";
      out += t.quoted ? "\"" + t.text + "\"" : t.text;
    }
    return out;
  }

  void run_euler(const RawCommand& cmd) {
    std::string joined;
    for (const Token& t : cmd.args) joined += t.text;
    auto [key, value] = key_value(joined.empty() ? arg_text(cmd, 0, "ranks=r1,r2,...") : joined);
    if (key != "ranks") throw JobParseError(cmd.line_no, "euler needs ranks=r1,r2,...");
    PolyfreeSeries series;
    for (const std::string& part : split_names(value))
      series.ranks.push_back(parse_int(part, cmd.line_no, "rank"));
    EulerData data = euler_data(series);
    emit("status: ok");
    emit("length: " + std::to_string(data.length));
    emit("characteristic: " + std::to_string(data.characteristic));
    emit("bound: " + (data.bound_applicable ? data.bound.to_string()
                                            : std::string("NOT_APPLICABLE")));
  }

  void run_snf(const RawCommand& cmd) {
    IntMatrix m(1, 1);
    try {
      m = parse_matrix(arg_text(cmd, 0, "a matrix literal"));
    } catch (const std::invalid_argument& e) {
      throw JobParseError(cmd.line_no, e.what());
    }
    SmithDecomposition s = smith_normal_form(m);
    if (s.u * m * s.v != s.d) throw std::logic_error("SNF back-multiplication failed");
    emit("status: ok");
    emit("u: " + format_matrix(s.u));
    emit("d: " + format_matrix(s.d));
    emit("v: " + format_matrix(s.v));
    emit("check: U*M*V = D");
  }

  void run_classify(const RawCommand& cmd) {
    IntMatrix m(1, 1);
    if (!cmd.args.empty()) {
      try {
        m = parse_matrix(cmd.args[0].text);
      } catch (const std::invalid_argument& e) {
        throw JobParseError(cmd.line_no, e.what());
      }
    } else {
      if (!job.group || job.group->quotient_rank() != 1)
        throw JobParseError(cmd.line_no,
                            "classify without a matrix needs a group with quotient Z");
      m = abelianized_matrix(job.group->action(0).twist);
    }
    emit("status: ok");
    emit("matrix: " + format_matrix(m));
    try {
      emit("class: " + torus_class_name(classify_gl2_torus(m)));
    } catch (const std::invalid_argument& e) {
      throw JobParseError(cmd.line_no, e.what());
    }
  }

  void run_verify(const RawCommand& cmd) {
    const auto& named = named_morphism(cmd, arg_text(cmd, 0, "a morphism name"), true);
    bool ok = !named.invalid && verify_endomorphism(*job.group, named.morphism);
    bool auto_ok = ok && named.morphism.has_inverse() &&
                   verify_automorphism(*job.group, named.morphism);
    emit(std::string("verified: ") + (ok ? "true" : "false"));
    if (named.invalid) emit("reason: " + *named.invalid);
    emit(std::string("automorphism: ") +
         (auto_ok ? "true"
                  : (named.morphism.has_inverse() ? "false" : "no inverse supplied")));
    if (!ok) report.exit_code = combine_exit_codes(report.exit_code, 3);
  }

  void run_certify(const RawCommand& cmd) {
    const std::string name = arg_text(cmd, 0, "a morphism name");
    const auto& named = named_morphism(cmd, name);
    if (!named.morphism.has_inverse())
      throw JobParseError(cmd.line_no,
                          "certify needs a two-sided inverse; add inverse_morphism " + name);
    Certificate cert = certify_r_infinite(*job.group, named.morphism, &job.naming);
    emit("status: ok");
    if (!named.note.empty()) emit("morphism: " + named.note);
    std::stringstream body(cert.serialize());
    std::string line;
    while (std::getline(body, line)) emit(line);
    if (cert.conclusion == Certificate::Conclusion::Undecided)
      report.exit_code = combine_exit_codes(report.exit_code, 4);
  }

  void run_orbits(const RawCommand& cmd) {
    const PfMorphism& f = named_morphism(cmd, arg_text(cmd, 0, "a morphism name")).morphism;
    int ball = job.options.ball, conj = job.options.conj;
    for (size_t i = 1; i < cmd.args.size(); ++i) {
      auto [key, value] = key_value(cmd.args[i].text);
      if (key == "L")
        ball = static_cast<int>(parse_int(value, cmd.line_no, "L"));
      else if (key == "C")
        conj = static_cast<int>(parse_int(value, cmd.line_no, "C"));
      else
        throw JobParseError(cmd.line_no, "unknown orbits parameter '" + cmd.args[i].text + "'");
    }
    OrbitReport r = twisted_orbit_report(*job.group, f, ball, conj, job.options.jobs);
    emit("status: ok");
    emit("ball_radius: " + std::to_string(r.ball_radius));
    emit("conjugator_radius: " + std::to_string(r.conjugator_radius));
    emit("ball_size: " + std::to_string(r.ball_size));
    emit("class_upper_bound: " + std::to_string(r.class_upper_bound));
    emit("invariant_lower_bound: " + std::to_string(r.invariant_lower_bound));
  }

  void run_centralizer(const RawCommand& cmd) {
    Word kernel(1), quotient(1);
    try {
      kernel = parse_word(job.naming.kernel, arg_text(cmd, 0, "a kernel word"));
      quotient = parse_word(job.naming.quotient, arg_text(cmd, 1, "a quotient word"));
    } catch (const WordParseError& e) {
      throw JobParseError(cmd.line_no, e.what());
    }
    PfElement e = job.group->element(kernel, quotient);
    SubgroupDescriptor d{SubgroupDescriptor::Tag::WholeGroup, {}, {}, {}, false, ""};
    if (job.group->is_direct())
      d = centralizer_direct_product(*job.group, e);
    else
      d = centralizer_z_semidirect(*job.group, e);
    emit("status: ok");
    emit("element: " + format_element(job.naming, e));
    emit("tag: " + d.tag_name());
    if (d.kernel_root)
      emit("kernel_root: " + format_word(job.naming.kernel, *d.kernel_root));
    if (d.quotient_root)
      emit("quotient_root: " + format_word(job.naming.quotient, *d.quotient_root));
    if (d.twisted_offset) emit("twisted_offset: " + std::to_string(*d.twisted_offset));
    emit(std::string("interpretation_dependent: ") + (d.interpretation_dependent ? "true" : "false"));
    if (!d.note.empty()) emit("note: " + d.note);
  }
};

}  // namespace

std::string Report::to_text(const std::string& format) const {
  std::string out;
  if (format == "text") out += "== polyfree report ==\n";
  for (const std::string& line : lines) {
    if (format == "text" && line.rfind("command: ", 0) == 0 && !out.empty()) out += "\n";
    out += line + "\n";
  }
  return out;
}

int combine_exit_codes(int a, int b) {
  static const int severity[] = {2, 5, 3, 4, 0};
  for (int code : severity)
    if (a == code || b == code) return code;
  return a != 0 ? a : b;
}

Report run_job_text(const std::string& text, const JobOverrides& overrides) {
  JobBuilder job;
  Report report;
  try {
    job.parse(text);
  } catch (const JobParseError& e) {
    report.lines.push_back(std::string("error: ") + e.what());
    report.exit_code = 2;
    return report;
  }
  if (overrides.ball >= 0) job.options.ball = overrides.ball;
  if (overrides.conj >= 0) job.options.conj = overrides.conj;
  if (overrides.jobs >= 1) job.options.jobs = overrides.jobs;

  Runner runner{job, {}};
  for (const RawCommand& cmd : job.commands) {
    try {
      runner.run(cmd);
    } catch (const ResourceCapError& e) {
      runner.emit(std::string("error: resource cap: ") + e.what());
      runner.report.exit_code = combine_exit_codes(runner.report.exit_code, 5);
      break;
    } catch (const JobParseError& e) {
      runner.emit(std::string("error: ") + e.what());
      runner.report.exit_code = 2;
      break;
    } catch (const std::exception& e) {
      runner.emit(std::string("error: ") + e.what());
      runner.report.exit_code = 2;
      break;
    }
  }
  return runner.report;
}

}  // namespace polyfree
