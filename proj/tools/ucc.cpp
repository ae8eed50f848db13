// ucc: validate, risk-classify, render and catalogue use case cards.
//
// Machine output goes to stdout, operational diagnostics to stderr.  Exit
// codes: 0 success, 1 validation errors, 2 parse errors, 3 usage errors,
// 4 I/O failures; with several inputs the worst code wins.

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifndef _WIN32
#include <unistd.h>
#endif

#include "CLI11.hpp"
#include "ucc/catalogue.hpp"
#include "ucc/render.hpp"

namespace {

namespace fs = std::filesystem;
using ucc::ojson;

enum ExitCode : int {
  kOk = 0,
  kInvalid = 1,
  kParseFailed = 2,
  kUsage = 3,
  kIo = 4,
};

bool color_enabled() {
#ifdef _WIN32
  return false;
#else
  return std::getenv("UCC_NO_COLOR") == nullptr && isatty(fileno(stdout)) != 0;
#endif
}

std::string paint(std::string_view text, const char* code, bool enable) {
  if (!enable) return std::string(text);
  return "\033[" + std::string(code) + "m" + std::string(text) + "\033[0m";
}

std::string severity_word(ucc::Severity sev, bool color) {
  return paint(to_string(sev), sev == ucc::Severity::error ? "31" : "33",
               color);
}

std::string tier_word(ucc::RiskTier tier, bool color) {
  const char* code = tier == ucc::RiskTier::high
                         ? "31"
                         : tier == ucc::RiskTier::transparency ? "33" : "32";
  return paint(to_string(tier), code, color);
}

void print_parse_diagnostics(std::ostream& out, const std::string& path,
                             const std::vector<ucc::ParseDiagnostic>& diags) {
  for (const auto& d : diags)
    out << path << ":" << d.location.line << ":" << d.location.column << ": "
        << d.code << ": " << d.message << "\n";
}

ojson parse_diagnostics_json(const std::vector<ucc::ParseDiagnostic>& diags) {
  auto arr = ojson::array();
  for (const auto& d : diags) {
    ojson o;
    o["code"] = d.code;
    o["column"] = d.location.column;
    o["line"] = d.location.line;
    o["message"] = d.message;
    arr.push_back(std::move(o));
  }
  return arr;
}

void print_findings(std::ostream& out, const std::string& path,
                    const ucc::Diagnostics& diag, bool color) {
  for (const auto& f : diag.findings)
    out << path << ": " << f.rule << " " << severity_word(f.severity, color)
        << " " << f.subject << ": " << f.message << "\n";
}

void emit(const std::optional<std::string>& out_path,
          const std::string& content) {
  if (out_path)
    ucc::write_text_file(*out_path, content);
  else
    std::cout << content;
}

constexpr const char* kSkeleton = R"(# use case card skeleton
# Lines starting with '#' are comments.  Long text values may continue on
# the following lines indented by exactly two spaces.

[card]
id: my-use-case
title: My use case
version: 0.1
date: 2024-01-01
provider: Example provider

[purpose]
context: Describe where and under which conditions the system is used,
  in at most 100 words.
scope: Describe the concrete functionality this use case delivers.
sdg: 3

[actor user]
name: User
kind: individual

# Mark at least one use case as an AI functionality (ai: yes) once the
# AI-supported behaviour is modelled.
[usecase main-function]
name: Main function
ai: no
main: yes

[relation]
kind: association
source: user
target: main-function

[table]
product: other-software
safety: no
area: other
primary: user
stakeholder: User | Benefits from the system working as described
precondition: The system is installed and configured
step: The user triggers the main function
extension: 1 | Something prevents the main function | Describe the fallback
issue: Record ethical considerations and foreseeable misuses here
)";

// ---------------------------------------------------------------------------

int cmd_init(const std::string& path) {
  if (fs::exists(path)) {
    std::cerr << "refusing to overwrite existing '" << path << "'\n";
    return kIo;
  }
  ucc::write_text_file(path, kSkeleton);
  std::cerr << "wrote " << path << "\n";
  return kOk;
}

int cmd_validate(const std::vector<std::string>& paths,
                 const std::string& format, bool strict) {
  bool color = format == "text" && color_enabled();
  int worst = kOk;
  auto files = ojson::array();
  for (const auto& path : paths) {
    std::string text;
    try {
      text = ucc::read_text_file(path);
    } catch (const ucc::IoError& e) {
      std::cerr << e.what() << "\n";
      worst = std::max<int>(worst, kIo);
      continue;
    }
    ucc::ParseResult parsed = ucc::parse_card(text);
    ojson entry;
    entry["file"] = path;
    if (!parsed.ok()) {
      worst = std::max<int>(worst, kParseFailed);
      if (format == "text")
        print_parse_diagnostics(std::cout, path, parsed.diagnostics);
      entry["findings"] = ojson::array();
      entry["parse_diagnostics"] = parse_diagnostics_json(parsed.diagnostics);
      files.push_back(std::move(entry));
      continue;
    }
    ucc::Diagnostics diag = ucc::validate(*parsed.card);
    if (!diag.valid())
      worst = std::max<int>(worst, kInvalid);
    else if (strict && diag.warning_count() > 0)
      worst = std::max<int>(worst, kInvalid);
    if (format == "text") {
      if (diag.findings.empty())
        std::cout << path << ": ok\n";
      else
        print_findings(std::cout, path, diag, color);
    }
    entry["findings"] = diag.to_json();
    entry["parse_diagnostics"] = ojson::array();
    files.push_back(std::move(entry));
  }
  if (format == "json") std::cout << files.dump(2) << "\n";
  return worst;
}

int cmd_assess(const std::string& path, const std::string& format) {
  ucc::ParseResult parsed = ucc::parse_card(ucc::read_text_file(path));
  if (!parsed.ok()) {
    print_parse_diagnostics(std::cerr, path, parsed.diagnostics);
    return kParseFailed;
  }
  ucc::Diagnostics diag = ucc::validate(*parsed.card);
  if (!diag.valid()) {
    print_findings(std::cerr, path, diag, false);
    return kInvalid;
  }
  ucc::RiskAssessment assessment = ucc::assess(*parsed.card);
  if (format == "json") {
    std::cout << assessment.to_json().dump(2) << "\n";
  } else {
    std::cout << "tier: " << tier_word(assessment.tier, color_enabled())
              << "\n"
              << ucc::explain(assessment);
  }
  return kOk;
}

int cmd_render(const std::string& path, const std::string& format,
               const std::optional<std::string>& out_path) {
  ucc::ParseResult parsed = ucc::parse_card(ucc::read_text_file(path));
  if (!parsed.ok()) {
    print_parse_diagnostics(std::cerr, path, parsed.diagnostics);
    return kParseFailed;
  }
  ucc::Diagnostics diag = ucc::validate(*parsed.card);
  if (!diag.valid()) {
    print_findings(std::cerr, path, diag, false);
    return kInvalid;
  }
  const ucc::UseCaseCard& card = *parsed.card;
  std::string doc = format == "html"
                        ? ucc::render_card_html(card, ucc::assess(card))
                        : ucc::render_svg(ucc::layout_diagram(card), card);
  emit(out_path, doc);
  return kOk;
}

int cmd_stats(const std::string& root, const std::string& format) {
  ucc::Catalogue cat = ucc::ingest(root);
  ucc::StatsReport report = ucc::stats(cat);
  if (format == "json")
    std::cout << ucc::stats_to_json(report).dump(2) << "\n";
  else
    std::cout << ucc::stats_to_text(report);
  return kOk;
}

int cmd_query(const std::string& root, const ucc::QueryFilter& filter,
              const std::string& format) {
  ucc::Catalogue cat = ucc::ingest(root);
  std::vector<ucc::CatalogueEntry> rows = ucc::query(cat, filter);
  if (format == "json") {
    ojson j;
    j["entries"] = ojson::array();
    for (const auto& e : rows) j["entries"].push_back(ucc::entry_to_json(e));
    j["total"] = static_cast<int>(rows.size());
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& e : rows)
      std::cout << e.path << "\t" << e.id << "\t"
                << (e.valid ? e.tier : "invalid") << "\t" << e.title << "\n";
  }
  return kOk;
}

int cmd_export_vocab(const std::string& which,
                     const std::optional<std::string>& out_path) {
  auto arr = ojson::array();
  if (which == "products") {
    for (const auto& p : ucc::product_types()) {
      ojson o;
      o["annex_ii"] = p.annex_ii;
      o["id"] = p.id;
      o["label"] = p.label;
      arr.push_back(std::move(o));
    }
  } else if (which == "areas") {
    for (const auto& a : ucc::application_areas()) {
      ojson o;
      o["id"] = a.id;
      o["label"] = a.label;
      o["subareas"] = ojson::array();
      for (const auto& s : a.subareas) {
        ojson sub;
        sub["annex_iii"] = s.annex_iii;
        sub["id"] = s.id;
        sub["label"] = s.label;
        o["subareas"].push_back(std::move(sub));
      }
      arr.push_back(std::move(o));
    }
  } else {
    for (const auto& s : ucc::sdgs()) {
      ojson o;
      o["name"] = s.name;
      o["number"] = s.number;
      arr.push_back(std::move(o));
    }
  }
  emit(out_path, arr.dump(2) + "\n");
  return kOk;
}

int cmd_export_card(const std::string& path,
                    const std::optional<std::string>& out_path) {
  ucc::ParseResult parsed = ucc::parse_card(ucc::read_text_file(path));
  if (!parsed.ok()) {
    print_parse_diagnostics(std::cerr, path, parsed.diagnostics);
    return kParseFailed;
  }
  ucc::Diagnostics diag = ucc::validate(*parsed.card);
  if (!diag.valid()) {
    print_findings(std::cerr, path, diag, false);
    return kInvalid;
  }
  emit(out_path, ucc::export_card_json(*parsed.card, diag,
                                       ucc::assess(*parsed.card)));
  return kOk;
}

int cmd_export_catalogue(const std::string& root,
                         const std::optional<std::string>& out_path) {
  emit(out_path, ucc::export_catalogue_json(ucc::ingest(root)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  assert(ucc::vocabularies_consistent());

  CLI::App app{"use case card toolkit", "ucc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ucc 1.0.0");

  std::string init_path;
  auto* init = app.add_subcommand("init", "write a skeleton card file");
  init->add_option("path", init_path, "card file to create")->required();

  std::vector<std::string> validate_paths;
  std::string validate_format = "text";
  bool strict = false;
  auto* validate =
      app.add_subcommand("validate", "parse and check one or more cards");
  validate->add_option("paths", validate_paths, "card files")
      ->required()
      ->expected(-1);
  validate->add_option("--format", validate_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  validate->add_flag("--strict", strict, "warnings also fail (exit 1)");

  std::string assess_path;
  std::string assess_format = "text";
  auto* assess_cmd =
      app.add_subcommand("assess", "classify a card's risk tier");
  assess_cmd->add_option("path", assess_path, "card file")->required();
  assess_cmd->add_option("--format", assess_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  std::string render_path;
  std::string render_format = "svg";
  std::string render_out;
  auto* render = app.add_subcommand("render", "render a card as SVG or HTML");
  render->add_option("path", render_path, "card file")->required();
  render->add_option("--format", render_format, "output format")
      ->check(CLI::IsMember({"svg", "html"}));
  render->add_option("--out", render_out, "output file (default: stdout)");

  std::string stats_root;
  std::string stats_format = "text";
  auto* stats = app.add_subcommand("stats", "aggregate a card directory");
  stats->add_option("root", stats_root, "directory to scan")->required();
  stats->add_option("--format", stats_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  std::string query_root;
  std::string query_format = "text";
  std::string q_tier, q_area, q_product, q_sdg;
  auto* query = app.add_subcommand("query", "filter a card directory");
  query->add_option("root", query_root, "directory to scan")->required();
  query->add_option("--tier", q_tier, "high, transparency or minimal");
  query->add_option("--area", q_area, "area slug or area/subarea");
  query->add_option("--product", q_product, "product type slug or label");
  query->add_option("--sdg", q_sdg, "goal number or name");
  query->add_option("--format", query_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  auto* exp = app.add_subcommand("export", "export vocabularies and cards");
  exp->require_subcommand(1);
  std::string vocab_kind;
  std::string export_out;
  auto* exp_vocab = exp->add_subcommand("vocab", "export a vocabulary");
  exp_vocab->add_option("which", vocab_kind, "products, areas or sdgs")
      ->required()
      ->check(CLI::IsMember({"products", "areas", "sdgs"}));
  std::string export_card_path;
  auto* exp_card =
      exp->add_subcommand("card", "export a card with its derived data");
  exp_card->add_option("path", export_card_path, "card file")->required();
  std::string export_cat_root;
  auto* exp_cat = exp->add_subcommand("catalogue", "export a directory index");
  exp_cat->add_option("root", export_cat_root, "directory to scan")
      ->required();
  for (auto* sub : {exp_vocab, exp_card, exp_cat})
    sub->add_option("--out", export_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  auto out_or_null = [](const std::string& s) {
    return s.empty() ? std::optional<std::string>() : std::optional(s);
  };

  try {
    if (init->parsed()) return cmd_init(init_path);
    if (validate->parsed())
      return cmd_validate(validate_paths, validate_format, strict);
    if (assess_cmd->parsed()) return cmd_assess(assess_path, assess_format);
    if (render->parsed())
      return cmd_render(render_path, render_format, out_or_null(render_out));
    if (stats->parsed()) return cmd_stats(stats_root, stats_format);
    if (query->parsed()) {
      ucc::QueryFilter filter;
      if (!q_tier.empty()) filter.tier = q_tier;
      if (!q_area.empty()) filter.area = q_area;
      if (!q_product.empty()) filter.product = q_product;
      if (!q_sdg.empty()) filter.sdg = q_sdg;
      return cmd_query(query_root, filter, query_format);
    }
    if (exp_vocab->parsed())
      return cmd_export_vocab(vocab_kind, out_or_null(export_out));
    if (exp_card->parsed())
      return cmd_export_card(export_card_path, out_or_null(export_out));
    if (exp_cat->parsed())
      return cmd_export_catalogue(export_cat_root, out_or_null(export_out));
  } catch (const ucc::UnknownFilterValue& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const ucc::IoError& e) {
    std::cerr << e.what() << "\n";
    return kIo;
  } catch (const ucc::DuplicateCardId& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const ucc::UccError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const fs::filesystem_error& e) {
    std::cerr << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
