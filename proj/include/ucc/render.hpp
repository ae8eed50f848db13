#pragma once

// Deterministic diagram layout and rendering.  Geometry is integral so that
// the same card produces byte-identical SVG on every run and platform; edge
// crossings are allowed rather than optimized away.
//
// Layout scheme: use case ovals form one vertical column inside the system
// boundary in declaration order.  The primary actor and every actor
// connected to it through generalizations stand left of the boundary, all
// other actors right, evenly spread along the boundary height.  Edges are
// straight segments between shape borders.

#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ucc/model.hpp"
#include "ucc/risk.hpp"
#include "ucc/validator.hpp"

namespace ucc {

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  bool operator==(const Rect&) const = default;
  int right() const { return x + w; }
  int bottom() const { return y + h; }
};

enum class Side { left, right };
enum class EdgeStyle { solid, dashed };
enum class Arrowhead { none, open, hollow_triangle };

struct Oval {
  std::string usecase_id;
  Point center;
  int rx = 0;
  int ry = 0;
  bool ai = false;
};

struct ActorGlyph {
  std::string actor_id;
  Point anchor;  // center of the 32x48 figure box
  Side side = Side::left;
};

struct Edge {
  int relation_index = 0;
  Point from;
  Point to;
  EdgeStyle style = EdgeStyle::solid;
  Arrowhead head = Arrowhead::none;
  std::string label;  // already decorated, e.g. "«include»"
};

struct DiagramLayout {
  int width = 0;
  int height = 0;
  Rect boundary;
  std::vector<Oval> ovals;
  std::vector<ActorGlyph> actors;
  std::vector<Edge> edges;
};

namespace layout {
inline constexpr int kOvalWidth = 160;
inline constexpr int kOvalHeight = 56;
inline constexpr int kGap = 24;
inline constexpr int kPadding = 32;
inline constexpr int kBoundaryX = 240;
inline constexpr int kBoundaryY = 16;
inline constexpr int kActorOffset = 120;  // boundary edge to actor anchor
inline constexpr int kActorHalfW = 16;
inline constexpr int kActorHalfH = 24;
inline constexpr int kCanvasWidth = 2 * kBoundaryX + kOvalWidth + 2 * kPadding;
}  // namespace layout

namespace detail {

inline Point ellipse_border(Point center, int rx, int ry, Point toward) {
  double dx = toward.x - center.x;
  double dy = toward.y - center.y;
  double u = 1.0 / std::sqrt((dx / rx) * (dx / rx) + (dy / ry) * (dy / ry));
  return {static_cast<int>(std::llround(center.x + dx * u)),
          static_cast<int>(std::llround(center.y + dy * u))};
}

inline Point box_border(Point center, int hw, int hh, Point toward) {
  double dx = toward.x - center.x;
  double dy = toward.y - center.y;
  double t = 1.0;
  if (dx != 0.0) t = std::min(t, hw / std::abs(dx));
  if (dy != 0.0) t = std::min(t, hh / std::abs(dy));
  return {static_cast<int>(std::llround(center.x + dx * t)),
          static_cast<int>(std::llround(center.y + dy * t))};
}

// Actors tied to the primary actor by generalization (in either direction)
// share its side of the boundary.
inline std::vector<bool> left_side_actors(const UseCaseCard& card) {
  const size_t n = card.actors.size();
  std::map<std::string_view, size_t> index;
  for (size_t i = 0; i < n; ++i) index[card.actors[i].id] = i;
  std::vector<std::vector<size_t>> adj(n);
  for (const auto& rel : card.relations) {
    if (rel.kind != RelationKind::actor_generalization) continue;
    auto s = index.find(rel.source);
    auto t = index.find(rel.target);
    if (s == index.end() || t == index.end()) continue;
    adj[s->second].push_back(t->second);
    adj[t->second].push_back(s->second);
  }
  std::vector<bool> left(n, false);
  auto primary = index.find(card.primary_actor);
  if (primary == index.end()) return left;
  std::vector<size_t> queue{primary->second};
  left[primary->second] = true;
  for (size_t qi = 0; qi < queue.size(); ++qi)
    for (size_t next : adj[queue[qi]])
      if (!left[next]) {
        left[next] = true;
        queue.push_back(next);
      }
  return left;
}

}  // namespace detail

// Precondition: the card validates without errors (NotValidated otherwise).
inline DiagramLayout layout_diagram(const UseCaseCard& card) {
  require_valid(card);
  using namespace layout;
  DiagramLayout out;

  const int n = static_cast<int>(card.use_cases.size());
  out.boundary = {kBoundaryX, kBoundaryY, kOvalWidth + 2 * kPadding,
                  2 * kPadding + n * kOvalHeight + (n - 1) * kGap};
  const int center_x = out.boundary.x + out.boundary.w / 2;
  for (int i = 0; i < n; ++i) {
    Point center{center_x, out.boundary.y + kPadding + kOvalHeight / 2 +
                               i * (kOvalHeight + kGap)};
    out.ovals.push_back({card.use_cases[i].id, center, kOvalWidth / 2,
                         kOvalHeight / 2, card.use_cases[i].is_ai});
  }

  std::vector<bool> lefts = detail::left_side_actors(card);
  int left_count = 0, right_count = 0;
  for (bool l : lefts) (l ? left_count : right_count)++;
  int left_seen = 0, right_seen = 0;
  for (size_t i = 0; i < card.actors.size(); ++i) {
    bool left = lefts[i];
    int rank = left ? left_seen++ : right_seen++;
    int count = left ? left_count : right_count;
    int x = left ? out.boundary.x - kActorOffset
                 : out.boundary.right() + kActorOffset;
    int y = out.boundary.y + ((2 * rank + 1) * out.boundary.h) / (2 * count);
    out.actors.push_back(
        {card.actors[i].id, {x, y}, left ? Side::left : Side::right});
  }

  std::map<std::string_view, const Oval*> oval_by_id;
  for (const auto& o : out.ovals) oval_by_id[o.usecase_id] = &o;
  std::map<std::string_view, const ActorGlyph*> actor_by_id;
  for (const auto& a : out.actors) actor_by_id[a.actor_id] = &a;

  for (size_t i = 0; i < card.relations.size(); ++i) {
    const auto& rel = card.relations[i];
    Edge edge;
    edge.relation_index = static_cast<int>(i);
    switch (rel.kind) {
      case RelationKind::association: {
        const ActorGlyph* actor = nullptr;
        const Oval* oval = nullptr;
        bool actor_is_source = actor_by_id.count(rel.source) != 0;
        actor = actor_by_id[actor_is_source ? rel.source : rel.target];
        oval = oval_by_id[actor_is_source ? rel.target : rel.source];
        Point at_actor = detail::box_border(actor->anchor, kActorHalfW,
                                            kActorHalfH, oval->center);
        Point at_oval = detail::ellipse_border(oval->center, oval->rx,
                                               oval->ry, actor->anchor);
        edge.from = actor_is_source ? at_actor : at_oval;
        edge.to = actor_is_source ? at_oval : at_actor;
        edge.style = EdgeStyle::solid;
        edge.head = Arrowhead::none;
        break;
      }
      case RelationKind::include:
      case RelationKind::extend: {
        const Oval* src = oval_by_id[rel.source];
        const Oval* dst = oval_by_id[rel.target];
        edge.from =
            detail::ellipse_border(src->center, src->rx, src->ry, dst->center);
        edge.to =
            detail::ellipse_border(dst->center, dst->rx, dst->ry, src->center);
        edge.style = EdgeStyle::dashed;
        edge.head = Arrowhead::open;
        edge.label = rel.kind == RelationKind::include ? "«include»"
                                                       : "«extend»";
        break;
      }
      case RelationKind::actor_generalization: {
        const ActorGlyph* src = actor_by_id[rel.source];
        const ActorGlyph* dst = actor_by_id[rel.target];
        edge.from = detail::box_border(src->anchor, kActorHalfW, kActorHalfH,
                                       dst->anchor);
        edge.to = detail::box_border(dst->anchor, kActorHalfW, kActorHalfH,
                                     src->anchor);
        edge.style = EdgeStyle::solid;
        edge.head = Arrowhead::hollow_triangle;  // points at the general actor
        break;
      }
    }
    out.edges.push_back(std::move(edge));
  }

  out.width = kCanvasWidth;
  int bottom = out.boundary.bottom();
  for (const auto& a : out.actors)
    bottom = std::max(bottom, a.anchor.y + kActorHalfH + 20);
  out.height = bottom + layout::kBoundaryY;
  return out;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline size_t codepoint_count(std::string_view s) {
  size_t n = 0;
  for (char c : s)
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  return n;
}

// First `limit` code points of a UTF-8 string.
inline std::string codepoint_prefix(std::string_view s, size_t limit) {
  size_t n = 0;
  size_t bytes = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (n == limit) break;
      ++n;
    }
    bytes = i + 1;
    if (n == limit &&
        (i + 1 == s.size() ||
         (static_cast<unsigned char>(s[i + 1]) & 0xC0) != 0x80))
      break;
  }
  return std::string(s.substr(0, bytes));
}

inline constexpr size_t kLabelLimit = 22;

struct SvgLabel {
  std::string shown;
  std::string full;  // non-empty iff truncated; becomes the hover title
};

inline SvgLabel clipped_label(std::string_view name) {
  if (codepoint_count(name) <= kLabelLimit) return {std::string(name), ""};
  return {codepoint_prefix(name, kLabelLimit - 1) + "…",
          std::string(name)};
}

inline void append_actor_figure(std::string& svg, Point a) {
  svg += "  <g class=\"actor\">\n";
  svg += "    <circle cx=\"" + std::to_string(a.x) + "\" cy=\"" +
         std::to_string(a.y - 17) +
         "\" r=\"7\" fill=\"none\" stroke=\"#000000\"/>\n";
  auto line = [&](int x1, int y1, int x2, int y2) {
    svg += "    <line x1=\"" + std::to_string(x1) + "\" y1=\"" +
           std::to_string(y1) + "\" x2=\"" + std::to_string(x2) + "\" y2=\"" +
           std::to_string(y2) + "\" stroke=\"#000000\"/>\n";
  };
  line(a.x, a.y - 10, a.x, a.y + 8);       // spine
  line(a.x - 14, a.y - 4, a.x + 14, a.y - 4);  // arms
  line(a.x, a.y + 8, a.x - 12, a.y + 24);  // legs
  line(a.x, a.y + 8, a.x + 12, a.y + 24);
  svg += "  </g>\n";
}

inline std::string svg_element(const DiagramLayout& layout,
                               const UseCaseCard& card) {
  std::map<std::string_view, const UseCaseNode*> uc_by_id;
  for (const auto& u : card.use_cases) uc_by_id[u.id] = &u;
  std::map<std::string_view, const Actor*> actor_by_id;
  for (const auto& a : card.actors) actor_by_id[a.id] = &a;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(layout.width) + "\" height=\"" +
         std::to_string(layout.height) + "\" viewBox=\"0 0 " +
         std::to_string(layout.width) + " " + std::to_string(layout.height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg +=
      "  <defs>\n"
      "    <marker id=\"arrow-open\" markerWidth=\"14\" markerHeight=\"12\" "
      "refX=\"12\" refY=\"6\" orient=\"auto\" "
      "markerUnits=\"userSpaceOnUse\">\n"
      "      <path d=\"M2 1 L12 6 L2 11\" fill=\"none\" "
      "stroke=\"#000000\"/>\n"
      "    </marker>\n"
      "    <marker id=\"arrow-hollow\" markerWidth=\"16\" markerHeight=\"14\" "
      "refX=\"14\" refY=\"7\" orient=\"auto\" "
      "markerUnits=\"userSpaceOnUse\">\n"
      "      <path d=\"M1 1 L14 7 L1 13 Z\" fill=\"#ffffff\" "
      "stroke=\"#000000\"/>\n"
      "    </marker>\n"
      "  </defs>\n";

  const Rect& b = layout.boundary;
  svg += "  <rect class=\"system-boundary\" x=\"" + std::to_string(b.x) +
         "\" y=\"" + std::to_string(b.y) + "\" width=\"" +
         std::to_string(b.w) + "\" height=\"" + std::to_string(b.h) +
         "\" fill=\"none\" stroke=\"#000000\"/>\n";

  for (const auto& e : layout.edges) {
    std::string cls = "edge-association";
    if (e.head == Arrowhead::hollow_triangle) cls = "edge-generalization";
    if (e.style == EdgeStyle::dashed)
      cls = e.label == "«extend»" ? "edge-extend" : "edge-include";
    svg += "  <line class=\"" + cls + "\" x1=\"" + std::to_string(e.from.x) +
           "\" y1=\"" + std::to_string(e.from.y) + "\" x2=\"" +
           std::to_string(e.to.x) + "\" y2=\"" + std::to_string(e.to.y) +
           "\" stroke=\"#000000\"";
    if (e.style == EdgeStyle::dashed) svg += " stroke-dasharray=\"6 4\"";
    if (e.head == Arrowhead::open) svg += " marker-end=\"url(#arrow-open)\"";
    if (e.head == Arrowhead::hollow_triangle)
      svg += " marker-end=\"url(#arrow-hollow)\"";
    svg += "/>\n";
  }

  for (const auto& o : layout.ovals) {
    svg += std::string("  <ellipse class=\"") + (o.ai ? "uc-ai" : "uc") +
           "\" cx=\"" + std::to_string(o.center.x) + "\" cy=\"" +
           std::to_string(o.center.y) + "\" rx=\"" + std::to_string(o.rx) +
           "\" ry=\"" + std::to_string(o.ry) + "\" fill=\"" +
           (o.ai ? "#cfe2f3" : "#ffffff") + "\" stroke=\"#000000\"/>\n";
  }

  for (const auto& a : layout.actors) append_actor_figure(svg, a.anchor);

  for (const auto& o : layout.ovals) {
    SvgLabel label = clipped_label(uc_by_id[o.usecase_id]->name);
    svg += "  <text class=\"uc-label\" x=\"" + std::to_string(o.center.x) +
           "\" y=\"" + std::to_string(o.center.y + 4) +
           "\" text-anchor=\"middle\">";
    if (!label.full.empty())
      svg += "<title>" + xml_escape(label.full) + "</title>";
    svg += xml_escape(label.shown) + "</text>\n";
  }
  for (const auto& a : layout.actors) {
    svg += "  <text class=\"actor-label\" x=\"" + std::to_string(a.anchor.x) +
           "\" y=\"" + std::to_string(a.anchor.y + 38) +
           "\" text-anchor=\"middle\">" +
           xml_escape(actor_by_id[a.actor_id]->name) + "</text>\n";
  }
  for (const auto& e : layout.edges) {
    if (e.label.empty()) continue;
    int mx = (e.from.x + e.to.x) / 2;
    int my = (e.from.y + e.to.y) / 2;
    bool steep = std::abs(e.to.y - e.from.y) > std::abs(e.to.x - e.from.x);
    if (steep)
      svg += "  <text class=\"edge-label\" x=\"" + std::to_string(mx + 8) +
             "\" y=\"" + std::to_string(my + 4) + "\">";
    else
      svg += "  <text class=\"edge-label\" x=\"" + std::to_string(mx) +
             "\" y=\"" + std::to_string(my - 6) +
             "\" text-anchor=\"middle\">";
    svg += xml_escape(e.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace detail

// Standalone SVG 1.1 document; byte-identical for equal inputs.
inline std::string render_svg(const DiagramLayout& layout,
                              const UseCaseCard& card) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" +
         detail::svg_element(layout, card);
}

namespace detail {

inline std::string html_escape(std::string_view s) { return xml_escape(s); }

// Escaped cell content; '\n' becomes <br>.
inline std::string html_text(std::string_view s) {
  std::string escaped = html_escape(s);
  std::string out;
  for (char c : escaped)
    if (c == '\n')
      out += "<br>";
    else
      out += c;
  return out;
}

inline std::string list_or_dash(const std::vector<std::string>& items,
                                bool ordered = false) {
  if (items.empty()) return "—";
  std::string out = ordered ? "<ol>" : "<ul>";
  for (const auto& item : items) out += "<li>" + item + "</li>";
  out += ordered ? "</ol>" : "</ul>";
  return out;
}

}  // namespace detail

// Self-contained HTML page: card table on the left, diagram on the right,
// risk badge in the header.  Preconditions: card valid, assessment produced
// from this card.
inline std::string render_card_html(const UseCaseCard& card,
                                    const RiskAssessment& assessment) {
  using detail::html_escape;
  using detail::html_text;
  using detail::list_or_dash;

  DiagramLayout layout = layout_diagram(card);

  std::string tier_class = "tier-" + std::string(to_string(assessment.tier));
  std::string badge = std::string(to_string(assessment.tier)) + " risk (";
  for (size_t i = 0; i < assessment.triggers.size(); ++i) {
    if (i) badge += ", ";
    badge += assessment.triggers[i].rule;
  }
  badge += ")";

  std::vector<std::string> sdg_items;
  for (const auto& raw : card.intended_purpose.sdgs) {
    const Sdg& goal = lookup_sdg(raw);
    sdg_items.push_back(std::to_string(goal.number) + ". " +
                        html_escape(goal.name));
  }
  std::vector<std::string> area_items;
  for (const auto& ref : card.application_entries) {
    ApplicationEntry entry = lookup_application_ref(ref);
    std::string item = html_escape(entry.area_label);
    if (!entry.subarea.empty())
      item += " / " + html_escape(entry.subarea_label);
    if (entry.annex_iii) item += " <em>(Annex III)</em>";
    area_items.push_back(std::move(item));
  }
  std::vector<std::string> actor_items;
  for (const auto& a : card.actors)
    actor_items.push_back(html_escape(a.name) + " <em>(" +
                          std::string(to_string(a.kind)) + ")</em>");
  std::vector<std::string> flag_items;
  for (const auto& f : card.transparency_flags)
    flag_items.push_back(std::string(to_string(f)));
  std::vector<std::string> stakeholder_items;
  for (const auto& s : card.stakeholders)
    stakeholder_items.push_back("<strong>" + html_escape(s.party) +
                                ":</strong> " + html_escape(s.interest));
  std::vector<std::string> precondition_items;
  for (const auto& p : card.preconditions)
    precondition_items.push_back(html_escape(p));
  std::vector<std::string> step_items;
  for (const auto& s : card.main_course) step_items.push_back(html_text(s.text));
  std::vector<std::string> extension_items;
  for (const auto& e : card.extensions)
    extension_items.push_back("step " + std::to_string(e.step_ref) + ", if " +
                              html_escape(e.condition) + ": " +
                              html_escape(e.handling));
  std::vector<std::string> issue_items;
  for (const auto& i : card.open_issues) issue_items.push_back(html_text(i));

  const Actor* primary = card.find_actor(card.primary_actor);

  std::string html;
  html += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n";
  html += "<meta charset=\"utf-8\">\n";
  html += "<title>" + html_escape(card.title) + "</title>\n";
  html +=
      "<style>\n"
      "body { font-family: sans-serif; margin: 24px; color: #111; }\n"
      "h1 { margin: 0 0 4px 0; }\n"
      ".meta { color: #555; margin: 0 0 10px 0; }\n"
      ".risk-badge { display: inline-block; padding: 3px 12px; border-radius:"
      " 12px; color: #fff; font-weight: bold; }\n"
      ".tier-high { background: #b3261e; }\n"
      ".tier-transparency { background: #b26a00; }\n"
      ".tier-minimal { background: #2e7d32; }\n"
      ".card { display: flex; gap: 24px; align-items: flex-start; flex-wrap:"
      " wrap; margin-top: 16px; }\n"
      ".card-table table { border-collapse: collapse; max-width: 620px; }\n"
      ".card-table th, .card-table td { border: 1px solid #999; padding: 6px"
      " 10px; vertical-align: top; text-align: left; }\n"
      ".card-table th { background: #eef2f7; }\n"
      ".card-table ul, .card-table ol { margin: 0; padding-left: 18px; }\n"
      "footer { margin-top: 16px; color: #555; font-size: 0.9em; }\n"
      "</style>\n</head>\n<body>\n";

  html += "<header>\n<h1>" + html_escape(card.title) + "</h1>\n";
  html += "<p class=\"meta\">" + html_escape(card.id) + " · version " +
          html_escape(card.version) + " · " + html_escape(card.date) +
          " · " + html_escape(card.provider) + "</p>\n";
  html += "<span class=\"risk-badge " + tier_class + "\">" + badge +
          "</span>\n</header>\n";

  html += "<main class=\"card\">\n<section class=\"card-table\">\n<table>\n";
  auto row = [&](std::string_view label, const std::string& value) {
    html += "<tr><th colspan=\"2\">" + std::string(label) + "</th><td>" +
            value + "</td></tr>\n";
  };
  html += "<tr><th rowspan=\"3\">Intended purpose</th><th>Context of use</th>"
          "<td>" +
          html_text(card.intended_purpose.context_of_use) + "</td></tr>\n";
  html += "<tr><th>Scope</th><td>" + html_text(card.intended_purpose.scope) +
          "</td></tr>\n";
  html += "<tr><th>SDGs</th><td>" + list_or_dash(sdg_items) + "</td></tr>\n";
  row("Type of product",
      html_escape(lookup_product_type(card.product_type).label));
  row("Safety component", card.safety_component ? "yes" : "no");
  row("Application areas", list_or_dash(area_items));
  row("Transparency flags", list_or_dash(flag_items));
  row("Primary actor", primary ? html_escape(primary->name) : "—");
  row("Actors", list_or_dash(actor_items));
  row("Stakeholders", list_or_dash(stakeholder_items));
  row("Preconditions", list_or_dash(precondition_items));
  row("Main course", list_or_dash(step_items, true));
  row("Extensions", list_or_dash(extension_items));
  row("Open issues", list_or_dash(issue_items));
  html += "</table>\n</section>\n";

  html += "<section class=\"card-diagram\">\n" +
          detail::svg_element(layout, card) + "</section>\n</main>\n";

  html += "<footer><p>" + html_escape(assessment.manual_review_note) +
          "</p></footer>\n";
  html += "</body>\n</html>\n";
  return html;
}

}  // namespace ucc
