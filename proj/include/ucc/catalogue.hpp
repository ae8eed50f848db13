#pragma once

// Corpus-level operations: scan a directory tree of .ucc files into a
// catalogue (persisted as ucc-index.json at the root), aggregate statistics,
// filter entries, and convert cards to and from JSON.
//
// All JSON comes out with two-space indentation, LF endings and one trailing
// newline; object keys are emitted in sorted order except per_sdg histogram
// keys, which sort numerically.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ucc/model.hpp"
#include "ucc/parser.hpp"
#include "ucc/risk.hpp"
#include "ucc/validator.hpp"

namespace ucc {

using ojson = nlohmann::ordered_json;

struct IoError : UccError {
  using UccError::UccError;
};
struct DuplicateCardId : UccError {
  using UccError::UccError;
};
struct UnknownFilterValue : UccError {
  using UccError::UccError;
};

inline constexpr std::string_view kIndexFileName = "ucc-index.json";

struct CatalogueEntry {
  std::string path;  // relative to the catalogue root, '/' separators
  std::string id;    // empty when the file did not parse
  std::string title;
  bool valid = false;
  // derived fields, only set when valid:
  std::string tier;
  std::string product;             // resolved product slug
  std::vector<std::string> areas;  // resolved entry slugs, declaration order
  std::vector<int> sdg_numbers;    // resolved, deduplicated, ascending
  bool operator==(const CatalogueEntry&) const = default;
};

struct Catalogue {
  std::string root;
  std::vector<CatalogueEntry> entries;
};

struct StatsReport {
  // per_tier counts valid cards only, so its counts sum to total - invalid
  std::map<std::string, int> per_tier;
  std::map<std::string, int> per_area;
  std::map<std::string, int> per_product;
  std::map<int, int> per_sdg;
  int total = 0;
  int invalid = 0;
};

// ---------------------------------------------------------------------------
// file IO

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return content;
}

// Write-and-rename so readers never observe a half-written file.
inline void write_file_atomic(const std::filesystem::path& target,
                              std::string_view content) {
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec)
    throw IoError("cannot replace '" + target.string() + "': " + ec.message());
}

inline void write_text_file(const std::filesystem::path& target,
                            std::string_view content) {
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + target.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("cannot write '" + target.string() + "'");
}

// ---------------------------------------------------------------------------
// card <-> JSON

inline ojson card_to_json(const UseCaseCard& card) {
  ojson j;
  j["actors"] = ojson::array();
  for (const auto& a : card.actors) {
    ojson o;
    o["id"] = a.id;
    o["kind"] = std::string(to_string(a.kind));
    o["name"] = a.name;
    j["actors"].push_back(std::move(o));
  }
  j["application_entries"] = ojson::array();
  for (const auto& e : card.application_entries) {
    ojson o;
    o["area"] = e.area;
    if (!e.subarea.empty()) o["subarea"] = e.subarea;
    j["application_entries"].push_back(std::move(o));
  }
  j["date"] = card.date;
  j["extensions"] = ojson::array();
  for (const auto& e : card.extensions) {
    ojson o;
    o["condition"] = e.condition;
    o["handling"] = e.handling;
    o["step_ref"] = e.step_ref;
    j["extensions"].push_back(std::move(o));
  }
  j["id"] = card.id;
  {
    ojson purpose;
    purpose["context_of_use"] = card.intended_purpose.context_of_use;
    purpose["scope"] = card.intended_purpose.scope;
    purpose["sdgs"] = card.intended_purpose.sdgs;
    j["intended_purpose"] = std::move(purpose);
  }
  j["main_course"] = ojson::array();
  for (const auto& s : card.main_course) j["main_course"].push_back(s.text);
  j["open_issues"] = card.open_issues;
  j["preconditions"] = card.preconditions;
  j["primary_actor"] = card.primary_actor;
  j["product_type"] = card.product_type;
  j["provider"] = card.provider;
  j["relations"] = ojson::array();
  for (const auto& r : card.relations) {
    ojson o;
    o["kind"] = std::string(to_string(r.kind));
    o["source"] = r.source;
    o["target"] = r.target;
    j["relations"].push_back(std::move(o));
  }
  j["safety_component"] = card.safety_component;
  j["stakeholders"] = ojson::array();
  for (const auto& s : card.stakeholders) {
    ojson o;
    o["interest"] = s.interest;
    o["party"] = s.party;
    j["stakeholders"].push_back(std::move(o));
  }
  j["title"] = card.title;
  j["transparency_flags"] = ojson::array();
  for (const auto& f : card.transparency_flags)
    j["transparency_flags"].push_back(std::string(to_string(f)));
  j["use_cases"] = ojson::array();
  for (const auto& u : card.use_cases) {
    ojson o;
    o["ai"] = u.is_ai;
    o["id"] = u.id;
    o["main"] = u.is_main;
    o["name"] = u.name;
    j["use_cases"].push_back(std::move(o));
  }
  j["version"] = card.version;
  return j;
}

inline UseCaseCard card_from_json(const ojson& j) {
  try {
    UseCaseCard card;
    card.id = j.at("id").get<std::string>();
    card.title = j.at("title").get<std::string>();
    card.version = j.at("version").get<std::string>();
    card.date = j.at("date").get<std::string>();
    card.provider = j.at("provider").get<std::string>();
    const auto& purpose = j.at("intended_purpose");
    card.intended_purpose.context_of_use =
        purpose.at("context_of_use").get<std::string>();
    card.intended_purpose.scope = purpose.at("scope").get<std::string>();
    for (const auto& s : purpose.at("sdgs"))
      card.intended_purpose.sdgs.push_back(s.get<std::string>());
    card.product_type = j.at("product_type").get<std::string>();
    card.safety_component = j.at("safety_component").get<bool>();
    for (const auto& e : j.at("application_entries")) {
      ApplicationRef ref;
      ref.area = e.at("area").get<std::string>();
      if (e.contains("subarea")) ref.subarea = e.at("subarea").get<std::string>();
      card.application_entries.push_back(std::move(ref));
    }
    for (const auto& f : j.at("transparency_flags")) {
      auto flag = parse_transparency_flag(f.get<std::string>());
      if (!flag)
        throw UccError("unknown transparency flag '" + f.get<std::string>() +
                       "'");
      card.transparency_flags.insert(*flag);
    }
    for (const auto& a : j.at("actors")) {
      Actor actor;
      actor.id = a.at("id").get<std::string>();
      actor.name = a.at("name").get<std::string>();
      auto kind = parse_actor_kind(a.at("kind").get<std::string>());
      if (!kind)
        throw UccError("unknown actor kind '" +
                       a.at("kind").get<std::string>() + "'");
      actor.kind = *kind;
      card.actors.push_back(std::move(actor));
    }
    for (const auto& u : j.at("use_cases")) {
      UseCaseNode node;
      node.id = u.at("id").get<std::string>();
      node.name = u.at("name").get<std::string>();
      node.is_ai = u.at("ai").get<bool>();
      node.is_main = u.at("main").get<bool>();
      card.use_cases.push_back(std::move(node));
    }
    for (const auto& r : j.at("relations")) {
      Relation rel;
      auto kind = parse_relation_kind(r.at("kind").get<std::string>());
      if (!kind)
        throw UccError("unknown relation kind '" +
                       r.at("kind").get<std::string>() + "'");
      rel.kind = *kind;
      rel.source = r.at("source").get<std::string>();
      rel.target = r.at("target").get<std::string>();
      card.relations.push_back(std::move(rel));
    }
    card.primary_actor = j.at("primary_actor").get<std::string>();
    for (const auto& s : j.at("stakeholders"))
      card.stakeholders.push_back({s.at("party").get<std::string>(),
                                   s.at("interest").get<std::string>()});
    for (const auto& p : j.at("preconditions"))
      card.preconditions.push_back(p.get<std::string>());
    for (const auto& s : j.at("main_course"))
      card.main_course.push_back(
          {static_cast<int>(card.main_course.size()) + 1,
           s.get<std::string>()});
    for (const auto& e : j.at("extensions"))
      card.extensions.push_back({e.at("step_ref").get<int>(),
                                 e.at("condition").get<std::string>(),
                                 e.at("handling").get<std::string>()});
    for (const auto& i : j.at("open_issues"))
      card.open_issues.push_back(i.get<std::string>());
    return card;
  } catch (const ojson::exception& e) {
    throw UccError(std::string("malformed card JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// catalogue

inline ojson entry_to_json(const CatalogueEntry& e) {
  ojson o;
  if (e.valid) o["areas"] = e.areas;
  o["id"] = e.id;
  o["path"] = e.path;
  if (e.valid) o["product"] = e.product;
  if (e.valid) o["sdgs"] = e.sdg_numbers;
  o["status"] = e.valid ? "valid" : "invalid";
  if (e.valid) o["tier"] = e.tier;
  o["title"] = e.title;
  return o;
}

inline ojson catalogue_to_json(const Catalogue& cat) {
  ojson j;
  j["entries"] = ojson::array();
  for (const auto& e : cat.entries) j["entries"].push_back(entry_to_json(e));
  j["total"] = static_cast<int>(cat.entries.size());
  return j;
}

inline std::string export_catalogue_json(const Catalogue& cat) {
  return catalogue_to_json(cat).dump(2) + "\n";
}

// Scan `root` recursively for *.ucc files and build the catalogue; the index
// file is (re)written at the root.  Fails hard when two parseable cards share
// an id.
inline Catalogue ingest(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec))
    throw IoError("'" + root.string() + "' is not a directory");

  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw IoError("cannot scan '" + root.string() + "': " + ec.message());
    if (it->is_regular_file() && it->path().extension() == ".ucc")
      files.push_back(it->path());
  }
  if (ec) throw IoError("cannot scan '" + root.string() + "': " + ec.message());

  std::vector<std::pair<std::string, fs::path>> ordered;
  for (const auto& p : files)
    ordered.emplace_back(fs::relative(p, root).generic_string(), p);
  std::sort(ordered.begin(), ordered.end());

  Catalogue cat;
  cat.root = root.string();
  std::map<std::string, std::string> id_to_path;
  for (const auto& [rel, full] : ordered) {
    CatalogueEntry entry;
    entry.path = rel;
    ParseResult parsed = parse_card(read_text_file(full));
    if (parsed.ok()) {
      const UseCaseCard& card = *parsed.card;
      entry.id = card.id;
      entry.title = card.title;
      auto [it, inserted] = id_to_path.emplace(card.id, rel);
      if (!inserted)
        throw DuplicateCardId("duplicate card id '" + card.id + "' in '" +
                              it->second + "' and '" + rel + "'");
      Diagnostics diag = validate(card);
      if (diag.valid()) {
        entry.valid = true;
        entry.tier = std::string(to_string(assess(card).tier));
        entry.product = lookup_product_type(card.product_type).id;
        for (const auto& ref : card.application_entries)
          entry.areas.push_back(lookup_application_ref(ref).slug());
        std::set<int> numbers;
        for (const auto& raw : card.intended_purpose.sdgs)
          numbers.insert(lookup_sdg(raw).number);
        entry.sdg_numbers.assign(numbers.begin(), numbers.end());
      }
    }
    cat.entries.push_back(std::move(entry));
  }

  write_file_atomic(root / kIndexFileName, export_catalogue_json(cat));
  return cat;
}

inline StatsReport stats(const Catalogue& cat) {
  StatsReport report;
  report.total = static_cast<int>(cat.entries.size());
  for (const auto& e : cat.entries) {
    if (!e.valid) {
      ++report.invalid;
      continue;
    }
    ++report.per_tier[e.tier];
    ++report.per_product[e.product];
    std::set<std::string> unique_areas(e.areas.begin(), e.areas.end());
    for (const auto& a : unique_areas) ++report.per_area[a];
    for (int n : e.sdg_numbers) ++report.per_sdg[n];
  }
  return report;
}

inline ojson stats_to_json(const StatsReport& report) {
  ojson j;
  j["invalid"] = report.invalid;
  j["per_area"] = ojson::object();
  for (const auto& [k, v] : report.per_area) j["per_area"][k] = v;
  j["per_product"] = ojson::object();
  for (const auto& [k, v] : report.per_product) j["per_product"][k] = v;
  j["per_sdg"] = ojson::object();
  for (const auto& [k, v] : report.per_sdg) j["per_sdg"][std::to_string(k)] = v;
  j["per_tier"] = ojson::object();
  for (const auto& [k, v] : report.per_tier) j["per_tier"][k] = v;
  j["total"] = report.total;
  return j;
}

inline std::string stats_to_text(const StatsReport& report) {
  std::string out;
  out += "total: " + std::to_string(report.total) + "\n";
  out += "invalid: " + std::to_string(report.invalid) + "\n";
  out += "tier:\n";
  for (const auto& [k, v] : report.per_tier)
    out += "  " + k + ": " + std::to_string(v) + "\n";
  out += "area:\n";
  for (const auto& [k, v] : report.per_area)
    out += "  " + k + ": " + std::to_string(v) + "\n";
  out += "product:\n";
  for (const auto& [k, v] : report.per_product)
    out += "  " + k + ": " + std::to_string(v) + "\n";
  out += "sdg:\n";
  for (const auto& [k, v] : report.per_sdg)
    out += "  " + std::to_string(k) + ": " + std::to_string(v) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// query

// Raw filter values as typed on the command line; empty optionals mean "any".
struct QueryFilter {
  std::optional<std::string> tier;
  std::optional<std::string> area;  // area slug or area/subarea
  std::optional<std::string> product;
  std::optional<std::string> sdg;  // number or name
};

namespace detail {

struct NormalizedQuery {
  std::optional<RiskTier> tier;
  std::optional<std::string> area;  // validated slug form
  std::optional<std::string> product_slug;
  std::optional<int> sdg_number;
};

inline NormalizedQuery normalize_query(const QueryFilter& filter) {
  NormalizedQuery q;
  if (filter.tier) {
    q.tier = parse_risk_tier(*filter.tier);
    if (!q.tier)
      throw UnknownFilterValue("unknown tier '" + *filter.tier +
                               "' (expected high, transparency or minimal)");
  }
  if (filter.area) {
    try {
      size_t slash = filter.area->find('/');
      if (slash == std::string::npos) {
        const Area* area = find_area(*filter.area);
        if (!area)
          throw UnknownArea("unknown application area '" + *filter.area + "'");
        q.area = area->id;
      } else {
        ApplicationEntry entry = lookup_application_subarea(
            filter.area->substr(0, slash), filter.area->substr(slash + 1));
        q.area = entry.slug();
      }
    } catch (const UnknownFilterValue&) {
      throw;
    } catch (const UccError& e) {
      throw UnknownFilterValue(e.what());
    }
  }
  if (filter.product) {
    try {
      q.product_slug = lookup_product_type(*filter.product).id;
    } catch (const UccError& e) {
      throw UnknownFilterValue(e.what());
    }
  }
  if (filter.sdg) {
    try {
      q.sdg_number = lookup_sdg(*filter.sdg).number;
    } catch (const UccError& e) {
      throw UnknownFilterValue(e.what());
    }
  }
  return q;
}

inline bool query_matches(const CatalogueEntry& entry,
                          const NormalizedQuery& q) {
  if (q.tier && (!entry.valid || entry.tier != to_string(*q.tier)))
    return false;
  if (q.product_slug && (!entry.valid || entry.product != *q.product_slug))
    return false;
  if (q.area) {
    if (!entry.valid) return false;
    bool hit = false;
    for (const auto& a : entry.areas)
      if (a == *q.area || a.rfind(*q.area + "/", 0) == 0) hit = true;
    if (!hit) return false;
  }
  if (q.sdg_number) {
    if (!entry.valid) return false;
    bool hit = false;
    for (int n : entry.sdg_numbers) hit = hit || n == *q.sdg_number;
    if (!hit) return false;
  }
  return true;
}

}  // namespace detail

// Conjunction of the given filters; result preserves catalogue order.
inline std::vector<CatalogueEntry> filter_entries(
    const std::vector<CatalogueEntry>& entries, const QueryFilter& filter) {
  detail::NormalizedQuery q = detail::normalize_query(filter);
  std::vector<CatalogueEntry> out;
  for (const auto& e : entries)
    if (detail::query_matches(e, q)) out.push_back(e);
  return out;
}

inline std::vector<CatalogueEntry> query(const Catalogue& cat,
                                         const QueryFilter& filter) {
  return filter_entries(cat.entries, filter);
}

// ---------------------------------------------------------------------------
// single-card export: the card plus everything derived from it

inline std::string export_card_json(const UseCaseCard& card,
                                    const Diagnostics& diagnostics,
                                    const RiskAssessment& assessment) {
  ojson j;
  j["assessment"] = assessment.to_json();
  j["card"] = card_to_json(card);
  j["diagnostics"] = diagnostics.to_json();
  return j.dump(2) + "\n";
}

}  // namespace ucc
