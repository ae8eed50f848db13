#pragma once

// Risk classification against the AI Act's tiers.  Rules are evaluated
// exhaustively and in a fixed order (R1, R2, R3 per entry, R4, R5) so that a
// report always lists every ground for the resulting tier, not just the
// first.  Unacceptable-risk practices cannot be detected from a card alone,
// which is what the manual review note is about.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ucc/model.hpp"
#include "ucc/validator.hpp"

namespace ucc {

enum class RiskTier { high, transparency, minimal };

inline std::string_view to_string(RiskTier t) {
  switch (t) {
    case RiskTier::high: return "high";
    case RiskTier::transparency: return "transparency";
    case RiskTier::minimal: return "minimal";
  }
  return "";
}

inline std::optional<RiskTier> parse_risk_tier(std::string_view s) {
  if (s == "high") return RiskTier::high;
  if (s == "transparency") return RiskTier::transparency;
  if (s == "minimal") return RiskTier::minimal;
  return std::nullopt;
}

struct RiskTrigger {
  std::string rule;     // R1..R5
  std::string subject;  // field path or vocabulary slug
  std::string legal_ref;
  bool operator==(const RiskTrigger&) const = default;
};

struct RiskAssessment {
  RiskTier tier = RiskTier::minimal;
  std::vector<RiskTrigger> triggers;
  std::string manual_review_note;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json obj;
    obj["manual_review_note"] = manual_review_note;
    obj["tier"] = std::string(to_string(tier));
    auto arr = nlohmann::ordered_json::array();
    for (const auto& t : triggers) {
      nlohmann::ordered_json trig;
      trig["legal_ref"] = t.legal_ref;
      trig["rule"] = t.rule;
      trig["subject"] = t.subject;
      arr.push_back(std::move(trig));
    }
    obj["triggers"] = std::move(arr);
    return obj;
  }
};

inline constexpr std::string_view kManualReviewNote =
    "Prohibited (unacceptable-risk) practices are outside the scope of this "
    "automated screening; review the use case manually against Art. 5 of the "
    "AI Act.";

namespace detail {
inline constexpr std::string_view legal_ref_for(std::string_view rule) {
  if (rule == "R1") return "Art. 3(14) / Annex II";
  if (rule == "R2") return "Art. 6 / Annex II";
  if (rule == "R3") return "Art. 6 / Annex III";
  if (rule == "R4") return "Art. 52 transparency obligations";
  return "minimal risk (no mandatory obligations)";
}
}  // namespace detail

// Precondition: the card validates without errors (NotValidated otherwise).
inline RiskAssessment assess(const UseCaseCard& card) {
  require_valid(card);
  RiskAssessment out;
  out.manual_review_note = std::string(kManualReviewNote);
  auto fire = [&](std::string_view rule, std::string subject) {
    out.triggers.push_back({std::string(rule), std::move(subject),
                            std::string(detail::legal_ref_for(rule))});
  };

  // R1: declared safety component of a product or system
  if (card.safety_component) fire("R1", "safety_component");

  // R2: product type covered by Union harmonisation legislation (Annex II)
  const ProductType& product = lookup_product_type(card.product_type);
  if (product.annex_ii) fire("R2", product.id);

  // R3: one trigger per application entry on the Annex III high-risk list
  for (const auto& ref : card.application_entries) {
    ApplicationEntry entry = lookup_application_ref(ref);
    if (entry.annex_iii) fire("R3", entry.slug());
  }

  bool high = !out.triggers.empty();

  // R4: transparency flags oblige disclosure; reported even when a high-risk
  // rule already fired, but only decides the tier on its own
  if (!card.transparency_flags.empty()) fire("R4", "transparency_flags");

  // R5: nothing else fired
  if (out.triggers.empty()) fire("R5", "intended_purpose");

  out.tier = high ? RiskTier::high
                  : (!card.transparency_flags.empty() ? RiskTier::transparency
                                                      : RiskTier::minimal);
  return out;
}

// One line per trigger plus the manual review note.
inline std::string explain(const RiskAssessment& assessment) {
  std::string out;
  for (const auto& t : assessment.triggers) {
    out += t.rule;
    out += ' ';
    out += t.subject;
    out += " [";
    out += t.legal_ref;
    out += "]: ";
    if (t.rule == "R1") {
      out += "the use case is declared a safety component of a product or "
             "system";
    } else if (t.rule == "R2") {
      out += "product type '" + lookup_product_type(t.subject).label +
             "' might be subject to other European Union harmonisation "
             "legislation (Annex II)";
    } else if (t.rule == "R3") {
      size_t slash = t.subject.find('/');
      ApplicationEntry entry = lookup_application_subarea(
          t.subject.substr(0, slash),
          slash == std::string::npos
              ? std::nullopt
              : std::optional<std::string_view>(t.subject.substr(slash + 1)));
      out += "application entry '" + t.subject +
             "' matches the high-risk list in Annex III: " +
             entry.subarea_label;
    } else if (t.rule == "R4") {
      out += "one or more transparency flags are set; the system must "
             "disclose itself to the natural persons concerned";
    } else {
      out += "no high-risk or transparency rule fired; the use case falls in "
             "the minimal-risk tier";
    }
    out += '\n';
  }
  out += "note: ";
  out += assessment.manual_review_note;
  out += '\n';
  return out;
}

}  // namespace ucc
