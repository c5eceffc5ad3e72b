#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "polyfree/job.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_stream(std::istream& in) {
  std::stringstream out;
  out << in.rdbuf();
  return out.str();
}

int run_one(const std::string& text, const polyfree::JobOverrides& overrides,
            const std::string& format) {
  polyfree::Report report = polyfree::run_job_text(text, overrides);
  std::cout << report.to_text(format);
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "polyfree: exact computations with length-2 polyfree groups, mapping tori,\n"
      "twisted conjugacy counts and infinitude certificates"};

  std::string job_path;
  std::string fixtures_dir;
  std::string format = "text";
  polyfree::JobOverrides overrides;

  app.add_option("job", job_path, "job file to run ('-' reads stdin)");
  app.add_option("--fixtures", fixtures_dir, "run every *.job file in a directory");
  app.add_option("--format", format, "output format: text or stable")
      ->check(CLI::IsMember({"text", "stable"}));
  app.add_option("--ball", overrides.ball, "override the ball radius");
  app.add_option("--conj", overrides.conj, "override the conjugator radius");
  app.add_option("--jobs", overrides.jobs, "worker count for parallel sections");

  CLI11_PARSE(app, argc, argv);

  if (!fixtures_dir.empty()) {
    std::vector<fs::path> files;
    try {
      for (const auto& entry : fs::directory_iterator(fixtures_dir))
        if (entry.path().extension() == ".job") files.push_back(entry.path());
    } catch (const fs::filesystem_error& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      std::cerr << "no .job files in " << fixtures_dir << "\n";
      return 2;
    }
    int exit_code = 0;
    for (const fs::path& file : files) {
      std::ifstream in(file);
      if (!in) {
        std::cerr << "cannot read " << file << "\n";
        return 2;
      }
      std::cout << "== job: " << file.filename().string() << " ==\n";
      exit_code = polyfree::combine_exit_codes(exit_code,
                                               run_one(read_stream(in), overrides, format));
    }
    return exit_code;
  }

  if (job_path.empty()) {
    std::cerr << app.help();
    return 2;
  }
  if (job_path == "-") return run_one(read_stream(std::cin), overrides, format);
  std::ifstream in(job_path);
  if (!in) {
    std::cerr << "cannot read " << job_path << "\n";
    return 2;
  }
  return run_one(read_stream(in), overrides, format);
}
