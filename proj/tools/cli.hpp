#pragma once

// Command-line front end: build / query / verify. Kept in a header with an
// explicit stream pair so tests can drive it in-process.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "enriched/enriched.hpp"

namespace enriched::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kBadInput = 2, kVerifyFailed = 3 };

struct CliConfig {
  std::string model_path;
  std::vector<std::string> corpus_paths;
  std::size_t max_span = 4;
  std::uint64_t min_count = 1;
  bool lowercase = true;
  std::size_t top_k = 10;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::string model_out = "model.json";
  std::string out;
  // query
  std::string verb;
  std::vector<std::string> args;
  bool all = false;
  std::string mode = "symmetric";
  // verify
  std::vector<std::string> perturb;
};

namespace detail {

inline bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return false;
  text = buf.str();
  return true;
}

inline int cmd_build(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  CorpusStats stats(cfg.max_span, cfg.lowercase);
  for (const auto& path : cfg.corpus_paths) {
    std::string text;
    if (!read_file(path, text)) {
      err << "error: cannot read corpus file " << path << "\n";
      return kUsage;
    }
    stats.merge(count_spans(tokenize(text, cfg.lowercase), cfg.max_span, cfg.lowercase));
  }
  stats = stats.pruned(cfg.min_count);
  if (stats.total_tokens() == 0) err << "warning: corpus is empty\n";
  try {
    save_model(cfg.model_out, stats);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  out << "objects: " << stats.size() << "\n"
      << "total_tokens: " << stats.total_tokens() << "\n";
  return kOk;
}

inline std::size_t verb_arity(const std::string& verb) {
  if (verb == "meaning" || verb == "near") return 1;
  if (verb == "hom" || verb == "dist" || verb == "homval" || verb == "and" || verb == "or" ||
      verb == "implies")
    return 2;
  return 0;
}

inline constexpr const char* kQueryUsage =
    "usage: enriched query MODEL VERB TEXT [TEXT]\n"
    "  scalar verbs:     hom X Y | dist X Y | homval X Y\n"
    "  copresheaf verbs: meaning X | and X Y | or X Y | implies X Y | near X\n";

inline int cmd_query(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::size_t arity = verb_arity(cfg.verb);
  if (arity == 0) {
    err << "error: unknown verb \"" << cfg.verb << "\"\n" << kQueryUsage;
    return kUsage;
  }
  if (cfg.args.size() != arity) {
    err << "error: " << cfg.verb << " takes " << arity << " argument" << (arity > 1 ? "s" : "")
        << ", got " << cfg.args.size() << "\n"
        << kQueryUsage;
    return kUsage;
  }

  CorpusStats stats;
  try {
    stats = load_model(cfg.model_path);
  } catch (const ModelError& e) {
    err << "error: " << cfg.model_path << ": " << e.what() << "\n";
    return kBadInput;
  }
  const SyntaxCategory cat(std::move(stats));

  std::vector<ObjectId> ids;
  for (const auto& raw : cfg.args) {
    Text t = tokenize(raw, cat.stats().lowercase());
    if (!cat.contains(t)) {
      err << "error: unknown object \"" << raw << "\"\n";
      return kBadInput;
    }
    ids.push_back(cat.id(t));
  }

  if (cfg.verb == "hom") {
    out << format_value(cat.hom(ids[0], ids[1])) << "\n";
    return kOk;
  }
  if (cfg.verb == "dist") {
    out << format_value(cat.metric_hom(ids[0], ids[1])) << "\n";
    return kOk;
  }
  if (cfg.verb == "homval") {
    out << format_value(hom_copresheaves(representable(cat, ids[0]), representable(cat, ids[1])))
        << "\n";
    return kOk;
  }

  const Copresheaf first = representable(cat, ids[0]);
  if (cfg.verb == "near") {
    NearMode mode;
    try {
      mode = parse_near_mode(cfg.mode);
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    }
    auto ranking = nearest_meanings(cat, first, cfg.all ? cat.size() : cfg.top_k, mode);
    if (!cfg.out.empty()) {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) {
        err << "error: cannot open " << cfg.out << " for writing\n";
        return kUsage;
      }
      write_ranking_tsv(f, cat, nearest_meanings(cat, first, cat.size(), mode));
    }
    if (cat.size() > 0) write_ranking_tsv(out, cat, ranking);
    return kOk;
  }

  Copresheaf result;
  if (cfg.verb == "meaning") {
    result = first;
  } else {
    const Copresheaf second = representable(cat, ids[1]);
    if (cfg.verb == "and") result = product(first, second);
    else if (cfg.verb == "or") result = coproduct(first, second);
    else result = internal_hom(cat, first, second);
  }

  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << cfg.out << " for writing\n";
      return kUsage;
    }
    write_copresheaf_tsv(f, cat, result);
  }
  if (cfg.all) {
    write_copresheaf_tsv(out, cat, result);
  } else {
    for (ObjectId c : rank_by_value(result, cfg.top_k))
      out << cat.label(c) << '\t' << format_value(result[c]) << '\n';
  }
  return kOk;
}

inline bool emit_report(const CliConfig& cfg, const VerificationReport& report, std::ostream& out,
                        std::ostream& err) {
  if (cfg.out.empty()) {
    out << report.dump();
    return true;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f || !(f << report.dump())) {
    err << "error: cannot write report " << cfg.out << "\n";
    return false;
  }
  return true;
}

inline int cmd_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  CorpusStats stats;
  try {
    stats = load_model(cfg.model_path);
  } catch (const ModelError& e) {
    // Still write a report so the failing spans are on record.
    VerificationReport bad;
    bad.seed = cfg.seed;
    bad.tolerance = cfg.tol;
    LawEntry& entry = bad.add("model_invariants");
    std::vector<std::string> witness;
    if (const auto* inv = dynamic_cast<const ModelInvariantError*>(&e)) {
      for (const auto& t : inv->witness()) witness.push_back(t.str());
    } else {
      witness.push_back(e.what());
    }
    entry.record(kInfinity, witness);
    emit_report(cfg, bad, out, err);
    err << "error: " << cfg.model_path << ": " << e.what() << "\n";
    return kBadInput;
  }

  SuiteConfig suite;
  suite.tol = cfg.tol;
  suite.seed = cfg.seed;
  const SyntaxCategory cat(std::move(stats));

  VerificationReport report;
  if (!cfg.perturb.empty()) {
    // --perturb FROM TO DELTA adds DELTA to one stored hom value.
    ObjectId x, y;
    double delta;
    try {
      x = cat.id(tokenize(cfg.perturb[0], cat.stats().lowercase()));
      y = cat.id(tokenize(cfg.perturb[1], cat.stats().lowercase()));
    } catch (const UnknownObjectError& e) {
      err << "error: " << e.what() << "\n";
      return kBadInput;
    }
    try {
      std::size_t used = 0;
      delta = std::stod(cfg.perturb[2], &used);
      if (used != cfg.perturb[2].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      err << "error: --perturb DELTA must be a number, got \"" << cfg.perturb[2] << "\"\n";
      return kUsage;
    }
    HomTable table = HomTable::from(cat);
    table.set_hom(x, y, table.hom(x, y) + delta);
    report = run_suite(table, suite);
  } else {
    report = run_suite(cat, suite);
  }

  if (!emit_report(cfg, report, out, err)) return kUsage;
  if (!cfg.out.empty()) {
    for (const auto& e : report.entries)
      err << (e.max_violation <= report.tolerance ? "pass  " : "FAIL  ") << e.law << "  "
          << format_value(e.max_violation) << "\n";
  }
  return report.passed() ? kOk : kVerifyFailed;
}

}  // namespace detail

/// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Enriched-category semantics over span statistics of a text corpus", "enriched"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto* build = app.add_subcommand("build", "Count spans in corpus files and write a model");
  build->add_option("corpus", cfg.corpus_paths, "Corpus files (one document each)")->required();
  build->add_option("--max-span", cfg.max_span, "Longest span to count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  build->add_option("--min-count", cfg.min_count, "Drop spans seen fewer times")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  build->add_flag("!--no-lowercase", cfg.lowercase, "Keep letter case");
  build->add_option("--out,-o", cfg.model_out, "Model file to write")->capture_default_str();

  auto* query = app.add_subcommand("query", "Evaluate a semantic query against a model");
  query->add_option("model", cfg.model_path, "Model file")->required();
  query->add_option("verb", cfg.verb, "hom|dist|homval|meaning|and|or|implies|near")->required();
  query->add_option("texts", cfg.args, "Argument texts");
  query->add_option("--top", cfg.top_k, "Lines to print for copresheaf verbs")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  query->add_flag("--all", cfg.all, "Print every object in object order");
  query->add_option("--mode", cfg.mode, "near: forward|backward|symmetric")->capture_default_str();
  query->add_option("--out,-o", cfg.out, "Also write the full TSV export here");

  auto* verify = app.add_subcommand("verify", "Run the law-checking suite on a model");
  verify->add_option("model", cfg.model_path, "Model file")->required();
  verify->add_option("--tol", cfg.tol, "Tolerance on every law")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", cfg.seed, "Seed for sampled checks")->capture_default_str();
  verify->add_option("--out,-o", cfg.out, "Report path (stdout when omitted)");
  verify->add_option("--perturb", cfg.perturb, "FROM TO DELTA: plant a fault in one hom value")
      ->expected(3)
      ->type_name("FROM TO DELTA");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (build->parsed()) return detail::cmd_build(cfg, out, err);
  if (verify->parsed()) return detail::cmd_verify(cfg, out, err);
  return detail::cmd_query(cfg, out, err);
}

}  // namespace enriched::cli
