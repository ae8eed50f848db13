#pragma once

// Reader and writer for the line-oriented .ucc card format.
//
// parse_card collects every problem it can find instead of stopping at the
// first one; referential checks (unknown slugs, dangling ids) are left to the
// validator so that a card with a misspelled slug still parses.
// serialize_card emits the canonical form: fixed section and key order, LF
// line endings, exactly one trailing newline.  serialize -> parse is the
// identity on cards, and parse -> serialize is a fixed point on text.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ucc/model.hpp"

namespace ucc {

struct SourceLocation {
  int line = 1;    // 1-based
  int column = 1;  // 1-based byte offset
  bool operator==(const SourceLocation&) const = default;
};

struct ParseDiagnostic {
  SourceLocation location;
  std::string code;  // P001..P006
  std::string message;
  bool operator==(const ParseDiagnostic&) const = default;
};

struct ParseResult {
  std::optional<UseCaseCard> card;  // engaged iff diagnostics is empty
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return card.has_value(); }
};

namespace detail {

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto word = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9');
  };
  if (!word(s[0])) return false;
  for (char c : s)
    if (!word(c) && c != '-' && c != '_') return false;
  return true;
}

inline bool is_slug(std::string_view s) {
  if (s.empty()) return false;
  auto ok = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
  };
  if (!ok(s[0])) return false;
  for (char c : s)
    if (!ok(c) && c != '-') return false;
  return true;
}

inline bool is_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (s[i] < '0' || s[i] > '9') return false;
  int month = (s[5] - '0') * 10 + (s[6] - '0');
  int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

inline std::string_view rtrim(std::string_view s) {
  while (!s.empty()) {
    char c = s.back();
    if (c == ' ' || c == '\t' || c == '\r')
      s.remove_suffix(1);
    else
      break;
  }
  return s;
}

inline std::string_view trim(std::string_view s) {
  s = rtrim(s);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  return s;
}

// Split on '|' and trim each part.
inline std::vector<std::string> split_pipes(std::string_view s) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t bar = s.find('|', start);
    if (bar == std::string_view::npos) {
      parts.emplace_back(trim(s.substr(start)));
      return parts;
    }
    parts.emplace_back(trim(s.substr(start, bar - start)));
    start = bar + 1;
  }
}

enum class Section { none, card, purpose, actor, usecase, relation, table };

inline std::string_view section_name(Section s) {
  switch (s) {
    case Section::card: return "card";
    case Section::purpose: return "purpose";
    case Section::actor: return "actor";
    case Section::usecase: return "usecase";
    case Section::relation: return "relation";
    case Section::table: return "table";
    case Section::none: break;
  }
  return "";
}

struct KeySpec {
  std::string_view name;
  bool repeatable = false;
  bool continuable = false;
};

inline const KeySpec* find_key(Section sec, std::string_view key) {
  static const std::vector<KeySpec> card_keys = {
      {"id"}, {"title"}, {"version"}, {"date"}, {"provider"}};
  static const std::vector<KeySpec> purpose_keys = {
      {"context", false, true}, {"scope", false, true}, {"sdg", true, false}};
  static const std::vector<KeySpec> actor_keys = {{"name"}, {"kind"}};
  static const std::vector<KeySpec> usecase_keys = {{"name"}, {"ai"}, {"main"}};
  static const std::vector<KeySpec> relation_keys = {
      {"kind"}, {"source"}, {"target"}};
  static const std::vector<KeySpec> table_keys = {
      {"product"},
      {"safety"},
      {"area", true, false},
      {"flag", true, false},
      {"primary"},
      {"stakeholder", true, false},
      {"precondition", true, true},
      {"step", true, true},
      {"extension", true, false},
      {"issue", true, true}};
  const std::vector<KeySpec>* keys = nullptr;
  switch (sec) {
    case Section::card: keys = &card_keys; break;
    case Section::purpose: keys = &purpose_keys; break;
    case Section::actor: keys = &actor_keys; break;
    case Section::usecase: keys = &usecase_keys; break;
    case Section::relation: keys = &relation_keys; break;
    case Section::table: keys = &table_keys; break;
    case Section::none: return nullptr;
  }
  for (const auto& k : *keys)
    if (k.name == key) return &k;
  return nullptr;
}

class CardParser {
 public:
  explicit CardParser(std::string_view text) : text_(text) {}

  ParseResult run() {
    if (text_.size() >= 3 && text_.substr(0, 3) == "\xEF\xBB\xBF")
      text_.remove_prefix(3);
    size_t pos = 0;
    int line_no = 0;
    while (pos <= text_.size()) {
      if (pos == text_.size() && line_no > 0) break;
      size_t eol = text_.find('\n', pos);
      std::string_view raw = (eol == std::string_view::npos)
                                 ? text_.substr(pos)
                                 : text_.substr(pos, eol - pos);
      ++line_no;
      handle_line(raw, line_no);
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
    }
    finish();
    ParseResult result;
    result.diagnostics = std::move(diagnostics_);
    if (result.diagnostics.empty()) result.card = std::move(card_);
    return result;
  }

 private:
  // ---- diagnostics ----
  void report(int line, int col, std::string_view code, std::string message) {
    diagnostics_.push_back({{line, col}, std::string(code), std::move(message)});
  }

  // ---- line dispatch ----
  void handle_line(std::string_view raw, int line_no) {
    std::string_view line = rtrim(raw);
    if (line.empty()) {
      close_value();  // a blank line always ends a continued value
      return;
    }
    if (line[0] == '#') return;  // comment lines are invisible
    if (line[0] == '[') {
      close_value();
      handle_header(line, line_no);
      return;
    }
    if (line.substr(0, 2) == "  ") {
      handle_continuation(line, line_no);
      return;
    }
    if (line[0] == ' ' || line[0] == '\t') {
      close_value();
      report(line_no, 1, "P004",
             "bad indentation: continuation lines start with exactly two "
             "spaces");
      return;
    }
    close_value();
    handle_key_line(line, line_no);
  }

  void handle_header(std::string_view line, int line_no) {
    size_t close = line.find(']');
    if (close == std::string_view::npos) {
      report(line_no, 1, "P005", "unterminated section header");
      enter_unknown_section();
      return;
    }
    if (!trim(line.substr(close + 1)).empty()) {
      report(line_no, static_cast<int>(close + 2), "P001",
             "unexpected text after ']'");
      enter_unknown_section();
      return;
    }
    std::string_view inside = trim(line.substr(1, close - 1));
    size_t space = inside.find(' ');
    std::string_view name =
        space == std::string_view::npos ? inside : inside.substr(0, space);
    std::string_view id =
        space == std::string_view::npos ? "" : trim(inside.substr(space + 1));

    Section sec = Section::none;
    if (name == "card") sec = Section::card;
    else if (name == "purpose") sec = Section::purpose;
    else if (name == "actor") sec = Section::actor;
    else if (name == "usecase") sec = Section::usecase;
    else if (name == "relation") sec = Section::relation;
    else if (name == "table") sec = Section::table;
    if (sec == Section::none) {
      report(line_no, 1, "P001",
             "unknown section header '[" + std::string(name) + "]'");
      enter_unknown_section();
      return;
    }
    bool wants_id = sec == Section::actor || sec == Section::usecase;
    if (wants_id && id.empty()) {
      report(line_no, 1, "P001",
             "section [" + std::string(name) + "] requires an id");
      enter_unknown_section();
      return;
    }
    if (!wants_id && !id.empty()) {
      report(line_no, 1, "P001",
             "section [" + std::string(name) + "] takes no id");
      enter_unknown_section();
      return;
    }
    if (wants_id && !is_identifier(id)) {
      report(line_no, static_cast<int>(line.find(id) + 1), "P001",
             "bad section id '" + std::string(id) + "'");
      enter_unknown_section();
      return;
    }
    enter_section(sec, std::string(id), line_no);
  }

  void handle_continuation(std::string_view line, int line_no) {
    if (!open_.active) {
      report(line_no, 1, "P004", "continuation line without a preceding key");
      return;
    }
    if (!open_.spec->continuable) {
      report(line_no, 1, "P004",
             "values of key '" + std::string(open_.spec->name) +
                 "' cannot span multiple lines");
      return;
    }
    open_.value += '\n';
    open_.value += line.substr(2);
  }

  void handle_key_line(std::string_view line, int line_no) {
    size_t colon = line.find(':');
    std::string_view key =
        colon == std::string_view::npos ? line : line.substr(0, colon);
    if (colon == std::string_view::npos || !is_identifier(key)) {
      report(line_no, 1, "P004", "expected 'key: value' or a section header");
      return;
    }
    if (skip_section_) {
      // body of an unknown or duplicate section: swallow silently, the
      // header diagnostic already covers it
      return;
    }
    if (section_ == Section::none) {
      report(line_no, 1, "P002",
             "key '" + std::string(key) + "' outside of any section");
      return;
    }
    const KeySpec* spec = find_key(section_, key);
    if (!spec) {
      report(line_no, 1, "P002",
             "unknown key '" + std::string(key) + "' in section [" +
                 std::string(section_name(section_)) + "]");
      return;
    }
    bool discard = false;
    if (!spec->repeatable) {
      if (seen_keys_.count(std::string(key))) {
        report(line_no, 1, "P003",
               "duplicate key '" + std::string(key) + "' in section [" +
                   std::string(section_name(section_)) + "]");
        discard = true;
      } else {
        seen_keys_.insert(std::string(key));
      }
    }
    std::string_view rest = line.substr(colon + 1);
    int value_col = static_cast<int>(colon + 2);
    if (!rest.empty() && rest.front() == ' ') {
      rest.remove_prefix(1);
      ++value_col;
    }
    open_.active = true;
    open_.spec = spec;
    open_.line = line_no;
    open_.value_col = value_col;
    open_.value = std::string(rest);
    open_.discard = discard;
  }

  // ---- sections ----
  void enter_unknown_section() {
    close_value();
    close_section();
    section_ = Section::none;
    skip_section_ = true;
  }

  void enter_section(Section sec, std::string id, int line_no) {
    close_section();
    skip_section_ = false;
    section_ = sec;
    section_id_ = std::move(id);
    section_line_ = line_no;
    seen_keys_.clear();
    relation_stage_ = {};
    actor_stage_ = {};
    usecase_stage_ = {};
    bool unique = sec == Section::card || sec == Section::purpose ||
                  sec == Section::table;
    if (unique) {
      bool* flag = sec == Section::card
                       ? &have_card_
                       : sec == Section::purpose ? &have_purpose_ : &have_table_;
      if (*flag) {
        report(line_no, 1, "P003",
               "duplicate section [" + std::string(section_name(sec)) + "]");
        skip_section_ = true;
      }
      *flag = true;
    }
    if (sec == Section::actor || sec == Section::usecase) {
      auto [it, inserted] = declared_ids_.emplace(section_id_, line_no);
      if (!inserted) {
        report(line_no, 1, "P003",
               "duplicate id '" + section_id_ + "' (first declared on line " +
                   std::to_string(it->second) + ")");
        skip_section_ = true;
      }
    }
  }

  void close_section() {
    close_value();
    if (skip_section_) return;
    switch (section_) {
      case Section::card:
        require_key("id");
        require_key("title");
        require_key("version");
        require_key("date");
        require_key("provider");
        break;
      case Section::purpose:
        require_key("context");
        require_key("scope");
        break;
      case Section::table:
        require_key("product");
        require_key("safety");
        require_key("primary");
        if (card_.application_entries.empty())
          report(section_line_, 1, "P006",
                 "missing required key 'area' in section [table]");
        break;
      case Section::actor:
        require_key("name");
        require_key("kind");
        actor_stage_.id = section_id_;
        card_.actors.push_back(actor_stage_);
        break;
      case Section::usecase:
        require_key("name");
        require_key("ai");
        usecase_stage_.id = section_id_;
        card_.use_cases.push_back(usecase_stage_);
        break;
      case Section::relation:
        require_key("kind");
        require_key("source");
        require_key("target");
        if (relation_stage_.complete == 3)
          card_.relations.push_back(relation_stage_.value);
        break;
      case Section::none: break;
    }
    section_ = Section::none;
  }

  void require_key(std::string_view key) {
    if (!seen_keys_.count(std::string(key)))
      report(section_line_, 1, "P006",
             "missing required key '" + std::string(key) + "' in section [" +
                 std::string(section_name(section_)) + "]");
  }

  // ---- value commit ----
  void close_value() {
    if (!open_.active) return;
    open_.active = false;
    if (open_.discard) return;
    commit(open_.spec->name, open_.value, open_.line, open_.value_col);
  }

  void fail_value(int line, int col, std::string message) {
    report(line, col, "P004", std::move(message));
  }

  void commit(std::string_view key, const std::string& value, int line,
              int col) {
    switch (section_) {
      case Section::card: commit_card(key, value, line, col); break;
      case Section::purpose: commit_purpose(key, value, line, col); break;
      case Section::actor: commit_actor(key, value, line, col); break;
      case Section::usecase: commit_usecase(key, value, line, col); break;
      case Section::relation: commit_relation(key, value, line, col); break;
      case Section::table: commit_table(key, value, line, col); break;
      case Section::none: break;
    }
  }

  std::optional<bool> parse_bool(const std::string& value, int line, int col) {
    if (value == "yes") return true;
    if (value == "no") return false;
    fail_value(line, col, "expected 'yes' or 'no', got '" + value + "'");
    return std::nullopt;
  }

  bool require_nonempty(std::string_view key, const std::string& value,
                        int line, int col) {
    if (!value.empty()) return true;
    fail_value(line, col, "empty value for key '" + std::string(key) + "'");
    return false;
  }

  void commit_card(std::string_view key, const std::string& value, int line,
                   int col) {
    if (key == "id") {
      if (!is_identifier(value))
        fail_value(line, col, "bad card id '" + value + "'");
      else
        card_.id = value;
    } else if (key == "title") {
      card_.title = value;
    } else if (key == "version") {
      card_.version = value;
    } else if (key == "date") {
      if (!is_iso_date(value))
        fail_value(line, col,
                   "date must be an ISO-8601 calendar date (YYYY-MM-DD), got '" +
                       value + "'");
      else
        card_.date = value;
    } else if (key == "provider") {
      card_.provider = value;
    }
  }

  void commit_purpose(std::string_view key, const std::string& value, int line,
                      int col) {
    if (key == "context") {
      card_.intended_purpose.context_of_use = value;
    } else if (key == "scope") {
      card_.intended_purpose.scope = value;
    } else if (key == "sdg") {
      if (!require_nonempty(key, value, line, col)) return;
      auto& list = card_.intended_purpose.sdgs;
      if (std::find(list.begin(), list.end(), value) == list.end())
        list.push_back(value);
    }
  }

  void commit_actor(std::string_view key, const std::string& value, int line,
                    int col) {
    if (key == "name") {
      actor_stage_.name = value;
    } else if (key == "kind") {
      auto kind = parse_actor_kind(value);
      if (!kind)
        fail_value(line, col,
                   "unknown actor kind '" + value +
                       "' (expected individual, group, external_system or "
                       "hardware_device)");
      else
        actor_stage_.kind = *kind;
    }
  }

  void commit_usecase(std::string_view key, const std::string& value, int line,
                      int col) {
    if (key == "name") {
      usecase_stage_.name = value;
    } else if (key == "ai") {
      if (auto b = parse_bool(value, line, col)) usecase_stage_.is_ai = *b;
    } else if (key == "main") {
      if (auto b = parse_bool(value, line, col)) usecase_stage_.is_main = *b;
    }
  }

  void commit_relation(std::string_view key, const std::string& value, int line,
                       int col) {
    if (key == "kind") {
      auto kind = parse_relation_kind(value);
      if (!kind) {
        fail_value(line, col,
                   "unknown relation kind '" + value +
                       "' (expected association, include, extend or "
                       "generalization)");
        return;
      }
      relation_stage_.value.kind = *kind;
      ++relation_stage_.complete;
    } else if (key == "source" || key == "target") {
      if (!is_identifier(value)) {
        fail_value(line, col, "bad relation endpoint '" + value + "'");
        return;
      }
      (key == "source" ? relation_stage_.value.source
                       : relation_stage_.value.target) = value;
      ++relation_stage_.complete;
    }
  }

  void commit_table(std::string_view key, const std::string& value, int line,
                    int col) {
    if (key == "product") {
      card_.product_type = value;
    } else if (key == "safety") {
      if (auto b = parse_bool(value, line, col)) card_.safety_component = *b;
    } else if (key == "area") {
      if (!require_nonempty(key, value, line, col)) return;
      size_t slash = value.find('/');
      std::string area =
          slash == std::string::npos ? value : value.substr(0, slash);
      std::string sub =
          slash == std::string::npos ? "" : value.substr(slash + 1);
      if (!is_slug(area) || (slash != std::string::npos && !is_slug(sub))) {
        fail_value(line, col,
                   "bad area reference '" + value +
                       "' (expected <area-slug> or <area-slug>/<subarea-slug>)");
        return;
      }
      card_.application_entries.push_back({area, sub});
    } else if (key == "flag") {
      if (!require_nonempty(key, value, line, col)) return;
      auto flag = parse_transparency_flag(value);
      if (!flag)
        fail_value(line, col, "unknown transparency flag '" + value + "'");
      else
        card_.transparency_flags.insert(*flag);
    } else if (key == "primary") {
      if (!is_identifier(value))
        fail_value(line, col, "bad actor reference '" + value + "'");
      else
        card_.primary_actor = value;
    } else if (key == "stakeholder") {
      auto parts = split_pipes(value);
      if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
        fail_value(line, col,
                   "expected 'stakeholder: <party> | <interest>', got '" +
                       value + "'");
        return;
      }
      card_.stakeholders.push_back({parts[0], parts[1]});
    } else if (key == "precondition") {
      if (require_nonempty(key, value, line, col))
        card_.preconditions.push_back(value);
    } else if (key == "step") {
      if (require_nonempty(key, value, line, col))
        card_.main_course.push_back(
            {static_cast<int>(card_.main_course.size()) + 1, value});
    } else if (key == "extension") {
      auto parts = split_pipes(value);
      if (parts.size() != 3 || parts[1].empty() || parts[2].empty()) {
        fail_value(line, col,
                   "expected 'extension: <step> | <condition> | <handling>', "
                   "got '" +
                       value + "'");
        return;
      }
      int step = 0;
      for (char c : parts[0]) {
        if (c < '0' || c > '9' || step > 9999) {
          step = -1;
          break;
        }
        step = step * 10 + (c - '0');
      }
      if (parts[0].empty() || step <= 0) {
        fail_value(line, col,
                   "extension step reference must be a positive integer, got '" +
                       parts[0] + "'");
        return;
      }
      card_.extensions.push_back({step, parts[1], parts[2]});
    } else if (key == "issue") {
      if (require_nonempty(key, value, line, col))
        card_.open_issues.push_back(value);
    }
  }

  // ---- end of input ----
  void finish() {
    close_section();
    if (!have_card_) report(1, 1, "P006", "missing required section [card]");
    if (!have_purpose_)
      report(1, 1, "P006", "missing required section [purpose]");
    if (!have_table_) report(1, 1, "P006", "missing required section [table]");
  }

  struct OpenValue {
    const KeySpec* spec = nullptr;
    int line = 0;
    int value_col = 1;
    std::string value;
    bool discard = false;
    bool active = false;
  };
  struct RelationStage {
    Relation value;
    int complete = 0;
  };

  std::string_view text_;
  std::vector<ParseDiagnostic> diagnostics_;
  UseCaseCard card_;

  Section section_ = Section::none;
  std::string section_id_;
  int section_line_ = 0;
  bool skip_section_ = false;
  std::set<std::string> seen_keys_;
  std::map<std::string, int> declared_ids_;
  bool have_card_ = false, have_purpose_ = false, have_table_ = false;

  OpenValue open_;
  Actor actor_stage_;
  UseCaseNode usecase_stage_;
  RelationStage relation_stage_;
};

// Append "key: value", continuing across lines at embedded '\n'.
inline void emit_value(std::string& out, std::string_view key,
                       std::string_view value) {
  out += key;
  size_t start = 0;
  bool first = true;
  while (true) {
    size_t nl = value.find('\n', start);
    std::string_view piece = nl == std::string_view::npos
                                 ? value.substr(start)
                                 : value.substr(start, nl - start);
    if (first) {
      out += ':';
      if (!piece.empty()) {
        out += ' ';
        out += piece;
      }
      first = false;
    } else {
      out += "\n  ";
      out += piece;
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  out += '\n';
}

}  // namespace detail

inline ParseResult parse_card(std::string_view text) {
  return detail::CardParser(text).run();
}

inline std::string serialize_card(const UseCaseCard& card) {
  using detail::emit_value;
  std::string out;
  out += "[card]\n";
  emit_value(out, "id", card.id);
  emit_value(out, "title", card.title);
  emit_value(out, "version", card.version);
  emit_value(out, "date", card.date);
  emit_value(out, "provider", card.provider);

  out += "\n[purpose]\n";
  emit_value(out, "context", card.intended_purpose.context_of_use);
  emit_value(out, "scope", card.intended_purpose.scope);
  for (const auto& sdg : card.intended_purpose.sdgs)
    emit_value(out, "sdg", sdg);

  for (const auto& actor : card.actors) {
    out += "\n[actor " + actor.id + "]\n";
    emit_value(out, "name", actor.name);
    emit_value(out, "kind", to_string(actor.kind));
  }

  for (const auto& uc : card.use_cases) {
    out += "\n[usecase " + uc.id + "]\n";
    emit_value(out, "name", uc.name);
    emit_value(out, "ai", uc.is_ai ? "yes" : "no");
    if (uc.is_main) emit_value(out, "main", "yes");
  }

  for (const auto& rel : card.relations) {
    out += "\n[relation]\n";
    emit_value(out, "kind", to_string(rel.kind));
    emit_value(out, "source", rel.source);
    emit_value(out, "target", rel.target);
  }

  out += "\n[table]\n";
  emit_value(out, "product", card.product_type);
  emit_value(out, "safety", card.safety_component ? "yes" : "no");
  for (const auto& entry : card.application_entries)
    emit_value(out, "area",
               entry.subarea.empty() ? entry.area
                                     : entry.area + "/" + entry.subarea);
  for (const auto& flag : card.transparency_flags)
    emit_value(out, "flag", to_string(flag));
  emit_value(out, "primary", card.primary_actor);
  for (const auto& s : card.stakeholders)
    emit_value(out, "stakeholder", s.party + " | " + s.interest);
  for (const auto& p : card.preconditions) emit_value(out, "precondition", p);
  for (const auto& step : card.main_course) emit_value(out, "step", step.text);
  for (const auto& ext : card.extensions)
    emit_value(out, "extension",
               std::to_string(ext.step_ref) + " | " + ext.condition + " | " +
                   ext.handling);
  for (const auto& issue : card.open_issues) emit_value(out, "issue", issue);
  return out;
}

}  // namespace ucc
