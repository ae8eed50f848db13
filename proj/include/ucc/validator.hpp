#pragma once

// Structural and referential checks over a parsed card.  Rules V1..V10;
// errors make a card invalid, warnings are advisory.  Findings come out in
// deterministic order: by rule, then by declaration order of the subject.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ucc/model.hpp"

namespace ucc {

struct NotValidated : UccError {
  using UccError::UccError;
};

enum class Severity { error, warning };

inline std::string_view to_string(Severity s) {
  return s == Severity::error ? "error" : "warning";
}

struct Finding {
  std::string rule;  // V1..V10
  Severity severity = Severity::error;
  std::string subject;  // id or field path
  std::string message;
  bool operator==(const Finding&) const = default;
};

struct Diagnostics {
  std::vector<Finding> findings;

  bool valid() const {
    for (const auto& f : findings)
      if (f.severity == Severity::error) return false;
    return true;
  }
  int error_count() const {
    int n = 0;
    for (const auto& f : findings) n += f.severity == Severity::error;
    return n;
  }
  int warning_count() const {
    return static_cast<int>(findings.size()) - error_count();
  }

  std::string to_text() const {
    std::string out;
    for (const auto& f : findings) {
      out += f.rule;
      out += ' ';
      out += to_string(f.severity);
      out += ' ';
      out += f.subject;
      out += ": ";
      out += f.message;
      out += '\n';
    }
    return out;
  }

  nlohmann::ordered_json to_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& f : findings) {
      nlohmann::ordered_json obj;
      obj["message"] = f.message;
      obj["rule"] = f.rule;
      obj["severity"] = std::string(to_string(f.severity));
      obj["subject"] = f.subject;
      arr.push_back(std::move(obj));
    }
    return arr;
  }
};

// Words are maximal runs of non-whitespace.
inline int word_count(std::string_view text) {
  int count = 0;
  bool in_word = false;
  for (char c : text) {
    bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

namespace detail {

// Tarjan's algorithm, iterative; components come out in reverse topological
// order, members in discovery order.
inline std::vector<std::vector<int>> strongly_connected_components(
    int n, const std::vector<std::vector<int>>& adj) {
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int next_index = 0;

  struct Frame {
    int node;
    size_t child;
  };
  std::vector<Frame> call;
  for (int start = 0; start < n; ++start) {
    if (index[start] != -1) continue;
    call.push_back({start, 0});
    while (!call.empty()) {
      auto& frame = call.back();
      int v = frame.node;
      if (frame.child == 0) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      bool descended = false;
      while (frame.child < adj[v].size()) {
        int w = adj[v][frame.child++];
        if (index[w] == -1) {
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        std::vector<int> comp;
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
          if (w == v) break;
        }
        components.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) {
        int parent = call.back().node;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return components;
}

}  // namespace detail

// One cycle per strongly connected component of the include/extend digraph,
// as lists of use-case indices beginning and ending at the component's
// earliest-declared node.  Empty result means the digraph is acyclic.
inline std::vector<std::vector<int>> include_extend_cycles(
    const UseCaseCard& card) {
  const int n = static_cast<int>(card.use_cases.size());
  std::vector<std::vector<int>> adj(n);
  std::map<std::string_view, int> by_id;
  for (int i = 0; i < n; ++i) by_id[card.use_cases[i].id] = i;
  bool any_self = false;
  for (const auto& rel : card.relations) {
    if (rel.kind != RelationKind::include && rel.kind != RelationKind::extend)
      continue;
    auto s = by_id.find(rel.source);
    auto t = by_id.find(rel.target);
    if (s == by_id.end() || t == by_id.end()) continue;
    adj[s->second].push_back(t->second);
    if (s->second == t->second) any_self = true;
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  std::vector<std::vector<int>> cycles;
  auto components = detail::strongly_connected_components(n, adj);
  std::vector<int> comp_of(n, -1);
  for (size_t c = 0; c < components.size(); ++c)
    for (int v : components[c]) comp_of[v] = static_cast<int>(c);

  std::vector<char> cyclic(components.size(), 0);
  for (size_t c = 0; c < components.size(); ++c)
    if (components[c].size() > 1) cyclic[c] = 1;
  if (any_self)
    for (int v = 0; v < n; ++v)
      for (int w : adj[v])
        if (w == v) cyclic[comp_of[v]] = 1;

  // walk each cyclic component from its earliest-declared node; BFS gives a
  // shortest, deterministic representative cycle
  std::vector<size_t> order;
  for (size_t c = 0; c < components.size(); ++c)
    if (cyclic[c]) order.push_back(c);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return *std::min_element(components[a].begin(), components[a].end()) <
           *std::min_element(components[b].begin(), components[b].end());
  });

  for (size_t c : order) {
    int root = *std::min_element(components[c].begin(), components[c].end());
    std::vector<int> parent(n, -2);
    std::vector<int> queue{root};
    parent[root] = -1;
    int closer = -1;  // node whose edge back to root closes the cycle
    for (size_t qi = 0; qi < queue.size() && closer == -1; ++qi) {
      int v = queue[qi];
      for (int w : adj[v]) {
        if (comp_of[w] != static_cast<int>(c)) continue;
        if (w == root) {
          closer = v;
          break;
        }
        if (parent[w] == -2) {
          parent[w] = v;
          queue.push_back(w);
        }
      }
    }
    std::vector<int> path;  // root .. closer
    for (int v = closer; v != -1; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    path.push_back(root);
    cycles.push_back(std::move(path));
  }
  return cycles;
}

inline Diagnostics validate(const UseCaseCard& card) {
  Diagnostics out;
  auto add = [&](std::string_view rule, Severity sev, std::string subject,
                 std::string message) {
    out.findings.push_back(
        {std::string(rule), sev, std::move(subject), std::move(message)});
  };

  // V1: resolvable primary actor, exactly one main use case
  if (!card.find_actor(card.primary_actor))
    add("V1", Severity::error, "primary_actor",
        "primary actor '" + card.primary_actor + "' is not a declared actor");
  int mains = 0;
  for (const auto& u : card.use_cases) mains += u.is_main;
  if (mains != 1)
    add("V1", Severity::error, "use_cases",
        "exactly one use case must be marked main, found " +
            std::to_string(mains));

  // V2: at least one AI functionality
  bool any_ai = false;
  for (const auto& u : card.use_cases) any_ai = any_ai || u.is_ai;
  if (!any_ai)
    add("V2", Severity::error, "use_cases",
        "at least one use case must be an AI functionality (ai: yes)");

  // V3: relation endpoints exist and fit the relation kind
  for (size_t i = 0; i < card.relations.size(); ++i) {
    const auto& rel = card.relations[i];
    std::string subject = "relations[" + std::to_string(i) + "]";
    const Actor* sa = card.find_actor(rel.source);
    const Actor* ta = card.find_actor(rel.target);
    const UseCaseNode* su = card.find_use_case(rel.source);
    const UseCaseNode* tu = card.find_use_case(rel.target);
    if ((!sa && !su) || (!ta && !tu)) {
      const std::string& missing = (!sa && !su) ? rel.source : rel.target;
      add("V3", Severity::error, subject,
          "relation endpoint '" + missing +
              "' is not a declared actor or use case");
      continue;
    }
    switch (rel.kind) {
      case RelationKind::association:
        if (!((sa && tu) || (su && ta)))
          add("V3", Severity::error, subject,
              "association must connect an actor and a use case ('" +
                  rel.source + "' -- '" + rel.target + "')");
        break;
      case RelationKind::include:
      case RelationKind::extend: {
        std::string kind(to_string(rel.kind));
        if (!su || !tu)
          add("V3", Severity::error, subject,
              kind + " must connect two use cases ('" + rel.source + "' -> '" +
                  rel.target + "')");
        else if (rel.source == rel.target)
          add("V3", Severity::error, subject,
              kind + " cannot relate use case '" + rel.source + "' to itself");
        break;
      }
      case RelationKind::actor_generalization:
        if (!sa || !ta)
          add("V3", Severity::error, subject,
              "generalization must connect two actors ('" + rel.source +
                  "' -> '" + rel.target + "')");
        else if (rel.source == rel.target)
          add("V3", Severity::error, subject,
              "generalization cannot relate actor '" + rel.source +
                  "' to itself");
        break;
    }
  }

  // V4: context and scope within the recommended word budget
  int context_words = word_count(card.intended_purpose.context_of_use);
  if (context_words > 100)
    add("V4", Severity::warning, "context_of_use",
        "context of use has " + std::to_string(context_words) +
            " words (recommended maximum is 100)");
  int scope_words = word_count(card.intended_purpose.scope);
  if (scope_words > 100)
    add("V4", Severity::warning, "scope",
        "scope has " + std::to_string(scope_words) +
            " words (recommended maximum is 100)");

  // V5: every vocabulary reference resolves
  try {
    lookup_product_type(card.product_type);
  } catch (const UccError& e) {
    add("V5", Severity::error, "product_type", e.what());
  }
  for (size_t i = 0; i < card.intended_purpose.sdgs.size(); ++i) {
    try {
      lookup_sdg(card.intended_purpose.sdgs[i]);
    } catch (const UccError& e) {
      add("V5", Severity::error, "sdgs[" + std::to_string(i) + "]", e.what());
    }
  }
  for (size_t i = 0; i < card.application_entries.size(); ++i) {
    try {
      lookup_application_ref(card.application_entries[i]);
    } catch (const UccError& e) {
      add("V5", Severity::error,
          "application_entries[" + std::to_string(i) + "]", e.what());
    }
  }

  // V6: the main use case participates in at least one relation
  if (mains == 1) {
    const UseCaseNode* main = card.main_use_case();
    bool involved = false;
    for (const auto& rel : card.relations) {
      if (rel.kind == RelationKind::actor_generalization) continue;
      if (rel.source == main->id || rel.target == main->id) involved = true;
    }
    if (!involved)
      add("V6", Severity::error, main->id,
          "main use case '" + main->id +
              "' does not participate in any relation");
  }

  // V7: main course present, extension step references in range
  if (card.main_course.empty())
    add("V7", Severity::error, "main_course",
        "main course must contain at least one step");
  for (size_t i = 0; i < card.extensions.size(); ++i) {
    int ref = card.extensions[i].step_ref;
    int steps = static_cast<int>(card.main_course.size());
    if (ref < 1 || ref > steps)
      add("V7", Severity::error, "extensions[" + std::to_string(i) + "]",
          "extension references step " + std::to_string(ref) +
              " but the main course has " + std::to_string(steps) + " steps");
  }

  // V8: actors that no relation mentions
  for (const auto& actor : card.actors) {
    bool referenced = false;
    for (const auto& rel : card.relations)
      if (rel.source == actor.id || rel.target == actor.id) referenced = true;
    if (!referenced)
      add("V8", Severity::warning, actor.id,
          "actor '" + actor.id + "' is not referenced by any relation");
  }

  // V9: include/extend digraph is acyclic
  for (const auto& cycle : include_extend_cycles(card)) {
    std::string path;
    for (size_t i = 0; i < cycle.size(); ++i) {
      if (i) path += " -> ";
      path += card.use_cases[cycle[i]].id;
    }
    add("V9", Severity::error, card.use_cases[cycle.front()].id,
        "include/extend cycle: " + path);
  }

  // V10: open issues should record ethical considerations
  if (card.open_issues.empty())
    add("V10", Severity::warning, "open_issues",
        "no open issues recorded; document ethical considerations and "
        "foreseeable misuses");

  return out;
}

// Precondition guard shared by the risk and rendering stages.
inline void require_valid(const UseCaseCard& card) {
  Diagnostics diag = validate(card);
  if (diag.valid()) return;
  for (const auto& f : diag.findings) {
    if (f.severity != Severity::error) continue;
    throw NotValidated("card '" + card.id + "' has validation errors (" +
                       f.rule + " " + f.subject + ": " + f.message + ")");
  }
}

}  // namespace ucc
