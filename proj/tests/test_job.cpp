#include "polyfree/job.hpp"

#include "doctest.h"

using namespace polyfree;

TEST_CASE("job parse and validation errors exit with code 2") {
  CHECK(run_job_text("").exit_code == 2);
  CHECK(run_job_text("nonsense line").exit_code == 2);
  CHECK(run_job_text("group kind=torus k=2").exit_code == 2);
  CHECK(run_job_text("command orbits f").exit_code == 2);  // needs a group

  SUBCASE("actions must be automorphisms") {
    Report r = run_job_text(
        "group kind=semidirect r=2 s=1\n"
        "action t: a -> \"a a\"\n"
        "command classify\n");
    CHECK(r.exit_code == 2);
    REQUIRE_FALSE(r.lines.empty());
    CHECK(r.lines[0].find("automorphism") != std::string::npos);
  }
  SUBCASE("commands other than verify reject broken morphisms") {
    Report r = run_job_text(
        "group kind=semidirect r=1 s=1\n"
        "action t: a -> \"a^-1\"\n"
        "morphism f: a -> \"t\", t -> \"a\"\n"
        "command orbits f L=2 C=2\n");
    CHECK(r.exit_code == 2);
    bool named = false;
    for (const std::string& line : r.lines)
      if (line.find("relator") != std::string::npos) named = true;
    CHECK(named);
  }
  SUBCASE("parse errors carry line numbers") {
    Report r = run_job_text("group kind=direct r=2 s=2\ncommand euler ranks=x\n");
    CHECK(r.exit_code == 2);
    CHECK(r.lines.back().find("line 2") != std::string::npos);
  }
  SUBCASE("direct products take no action lines") {
    Report r = run_job_text(
        "group kind=direct r=1 s=1\n"
        "action t: a -> \"a^-1\"\n"
        "command classify\n");
    CHECK(r.exit_code == 2);
  }
  SUBCASE("unnamed families default to theta") {
    Report r = run_job_text(
        "group kind=mapping_torus k=2\n"
        "family form=a m=0 i=1\n"
        "command verify theta\n");
    CHECK(r.exit_code == 0);
  }
}

TEST_CASE("verification failures exit with code 3") {
  Report bad = run_job_text(
      "group kind=semidirect r=1 s=1\n"
      "action t: a -> \"a^-1\"\n"
      "morphism f: a -> \"t\", t -> \"a\"\n"
      "command verify f\n");
  CHECK(bad.exit_code == 3);
  bool named = false;
  for (const std::string& line : bad.lines)
    if (line.find("relator") != std::string::npos) named = true;
  CHECK(named);

  // a claimed inverse that does not compose to the identity is malformed input
  Report malformed = run_job_text(
      "group kind=semidirect r=1 s=1\n"
      "action t: a -> \"a^-1\"\n"
      "morphism f: a -> \"a^3\"\n"
      "inverse_morphism f: a -> \"a\"\n"
      "command verify f\n");
  CHECK(malformed.exit_code == 2);

  Report ok = run_job_text(
      "group kind=semidirect r=1 s=1\n"
      "action t: a -> \"a^-1\"\n"
      "morphism f: a -> \"a^3\"\n"
      "command verify f\n");
  CHECK(ok.exit_code == 0);
}

TEST_CASE("undecided certificates exit with code 4") {
  Report r = run_job_text(
      "group kind=direct r=1 s=1\n"
      "morphism f: a -> \"a^2 t\", t -> \"a t\"\n"
      "command certify f\n");
  CHECK(r.exit_code == 4);
}

TEST_CASE("resource caps exit with code 5") {
  Report r = run_job_text(
      "group kind=direct r=2 s=2\n"
      "command orbits f L=9 C=2\n"
      "morphism f: a -> \"a\"\n");
  CHECK(r.exit_code == 5);
}

TEST_CASE("reports are byte-stable across runs and worker counts") {
  const std::string job =
      "group kind=mapping_torus k=2\n"
      "family theta: form=d m=1 i=0\n"
      "command classify\n"
      "command orbits theta L=2 C=3\n"
      "command certify theta\n";
  Report a = run_job_text(job, {});
  Report b = run_job_text(job, {});
  CHECK(a.to_text("stable") == b.to_text("stable"));
  JobOverrides four;
  four.jobs = 4;
  Report c = run_job_text(job, four);
  CHECK(a.to_text("stable") == c.to_text("stable"));
  CHECK(a.exit_code == 0);
}

TEST_CASE("text mode adds the banner, stable mode stays bare") {
  Report r = run_job_text("command euler ranks=2,2\n");
  CHECK(r.to_text("text").rfind("== polyfree report ==", 0) == 0);
  CHECK(r.to_text("stable").rfind("command:", 0) == 0);
}

TEST_CASE("group-free commands run without a group block") {
  Report r = run_job_text("command euler ranks=2,2\ncommand snf \"0 3; 0 0\"\n");
  CHECK(r.exit_code == 0);
  bool has_bound = false, has_d = false;
  for (const std::string& line : r.lines) {
    if (line == "bound: 16") has_bound = true;
    if (line == "d: 3 0; 0 0") has_d = true;
  }
  CHECK(has_bound);
  CHECK(has_d);
}

TEST_CASE("rank-3 kernels take explicit inverse action lines") {
  Report missing = run_job_text(
      "group kind=semidirect r=3 s=1\n"
      "action t: a -> \"b\", b -> \"c\", c -> \"a\"\n"
      "command classify\n");
  CHECK(missing.exit_code == 2);

  Report ok = run_job_text(
      "group kind=semidirect r=3 s=1\n"
      "action t: a -> \"b\", b -> \"c\", c -> \"a\"\n"
      "inverse t: a -> \"c\", b -> \"a\", c -> \"b\"\n"
      "morphism f: a -> \"a\"\n"
      "command verify f\n"
      "command certify f\n");
  CHECK(ok.exit_code == 0);
  bool infinite = false;
  for (const std::string& line : ok.lines)
    if (line == "conclusion: R_INFINITE") infinite = true;
  CHECK(infinite);
}

TEST_CASE("centralizer command prints descriptor payloads") {
  Report r = run_job_text(
      "group kind=semidirect r=1 s=2\n"
      "action u: a -> \"a^-1\"\n"
      "command centralizer \"a\" \"u^2\"\n");
  CHECK(r.exit_code == 0);
  bool tagged = false;
  for (const std::string& line : r.lines)
    if (line == "tag: ZCrossCentralizerSquares") tagged = true;
  CHECK(tagged);
}
