#pragma once

// Domain model for use case cards: the card value types, the three closed
// vocabularies (product types, application areas/subareas, SDGs) with their
// AI Act annex flags, and the lookup operations everything else builds on.

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ucc {

struct UccError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownProductType : UccError {
  using UccError::UccError;
};
struct UnknownArea : UccError {
  using UccError::UccError;
};
struct MissingSubarea : UccError {
  using UccError::UccError;
};
struct UnknownSubarea : UccError {
  using UccError::UccError;
};
struct UnknownSdg : UccError {
  using UccError::UccError;
};

// ---------------------------------------------------------------------------
// Closed enumerations

enum class ActorKind { individual, group, external_system, hardware_device };

enum class RelationKind { association, include, extend, actor_generalization };

enum class TransparencyFlag {
  interacts_with_natural_persons,
  emotion_recognition,
  biometric_categorisation,
  generates_or_manipulates_content,
};

inline constexpr int kTransparencyFlagCount = 4;

inline std::string_view to_string(ActorKind k) {
  switch (k) {
    case ActorKind::individual: return "individual";
    case ActorKind::group: return "group";
    case ActorKind::external_system: return "external_system";
    case ActorKind::hardware_device: return "hardware_device";
  }
  return "";
}

inline std::optional<ActorKind> parse_actor_kind(std::string_view s) {
  if (s == "individual") return ActorKind::individual;
  if (s == "group") return ActorKind::group;
  if (s == "external_system") return ActorKind::external_system;
  if (s == "hardware_device") return ActorKind::hardware_device;
  return std::nullopt;
}

inline std::string_view to_string(RelationKind k) {
  switch (k) {
    case RelationKind::association: return "association";
    case RelationKind::include: return "include";
    case RelationKind::extend: return "extend";
    case RelationKind::actor_generalization: return "generalization";
  }
  return "";
}

inline std::optional<RelationKind> parse_relation_kind(std::string_view s) {
  if (s == "association") return RelationKind::association;
  if (s == "include") return RelationKind::include;
  if (s == "extend") return RelationKind::extend;
  if (s == "generalization") return RelationKind::actor_generalization;
  return std::nullopt;
}

inline std::string_view to_string(TransparencyFlag f) {
  switch (f) {
    case TransparencyFlag::interacts_with_natural_persons:
      return "interacts_with_natural_persons";
    case TransparencyFlag::emotion_recognition: return "emotion_recognition";
    case TransparencyFlag::biometric_categorisation:
      return "biometric_categorisation";
    case TransparencyFlag::generates_or_manipulates_content:
      return "generates_or_manipulates_content";
  }
  return "";
}

inline std::optional<TransparencyFlag> parse_transparency_flag(
    std::string_view s) {
  if (s == "interacts_with_natural_persons")
    return TransparencyFlag::interacts_with_natural_persons;
  if (s == "emotion_recognition") return TransparencyFlag::emotion_recognition;
  if (s == "biometric_categorisation")
    return TransparencyFlag::biometric_categorisation;
  if (s == "generates_or_manipulates_content")
    return TransparencyFlag::generates_or_manipulates_content;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Card value types
//
// Vocabulary references (product type, application areas, SDGs) are stored as
// the raw keys written in the card file; resolving them against the
// vocabularies is the validator's job, so a card with a misspelled slug is
// still representable and can be reported precisely.

struct Actor {
  std::string id;
  std::string name;
  ActorKind kind = ActorKind::individual;
  bool operator==(const Actor&) const = default;
};

struct UseCaseNode {
  std::string id;
  std::string name;
  bool is_ai = false;
  bool is_main = false;
  bool operator==(const UseCaseNode&) const = default;
};

struct Relation {
  RelationKind kind = RelationKind::association;
  std::string source;
  std::string target;
  bool operator==(const Relation&) const = default;
};

struct IntendedPurpose {
  std::string context_of_use;
  std::string scope;
  std::vector<std::string> sdgs;  // raw keys: goal numbers or names
  bool operator==(const IntendedPurpose&) const = default;
};

struct ApplicationRef {
  std::string area;     // area slug
  std::string subarea;  // subarea slug, empty when the area has none
  bool operator==(const ApplicationRef&) const = default;
};

struct Stakeholder {
  std::string party;
  std::string interest;
  bool operator==(const Stakeholder&) const = default;
};

struct Step {
  int index = 0;  // 1-based position in the main course
  std::string text;
  bool operator==(const Step&) const = default;
};

struct Extension {
  int step_ref = 0;
  std::string condition;
  std::string handling;
  bool operator==(const Extension&) const = default;
};

struct UseCaseCard {
  std::string id;
  std::string title;
  std::string version;
  std::string date;  // ISO-8601 calendar date
  std::string provider;
  IntendedPurpose intended_purpose;
  std::string product_type;  // raw key: slug or label
  bool safety_component = false;
  std::vector<ApplicationRef> application_entries;
  std::set<TransparencyFlag> transparency_flags;
  std::vector<Actor> actors;
  std::vector<UseCaseNode> use_cases;
  std::vector<Relation> relations;
  std::string primary_actor;  // actor id
  std::vector<Stakeholder> stakeholders;
  std::vector<std::string> preconditions;
  std::vector<Step> main_course;
  std::vector<Extension> extensions;
  std::vector<std::string> open_issues;
  bool operator==(const UseCaseCard&) const = default;

  const UseCaseNode* main_use_case() const {
    for (const auto& u : use_cases)
      if (u.is_main) return &u;
    return nullptr;
  }
  const Actor* find_actor(std::string_view id_) const {
    for (const auto& a : actors)
      if (a.id == id_) return &a;
    return nullptr;
  }
  const UseCaseNode* find_use_case(std::string_view id_) const {
    for (const auto& u : use_cases)
      if (u.id == id_) return &u;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Vocabularies
//
// Slugs are the stable file-format keys; labels are the display strings.
// Annex flags reflect the AI Act lists as of the Council general approach of
// December 2022.

struct ProductType {
  std::string id;  // slug
  std::string label;
  bool annex_ii = false;
};

struct Subarea {
  std::string id;  // slug, unique within its area
  std::string label;
  bool annex_iii = false;
};

struct Area {
  std::string id;  // slug
  std::string label;
  std::vector<Subarea> subareas;
};

struct Sdg {
  int number = 0;
  std::string name;
};

// Resolved (area, subarea) pair as returned by lookup_application_subarea.
struct ApplicationEntry {
  std::string area;
  std::string area_label;
  std::string subarea;  // empty when the area has no subareas
  std::string subarea_label;
  bool annex_iii = false;

  // canonical reference: "area" or "area/subarea"
  std::string slug() const {
    return subarea.empty() ? area : area + "/" + subarea;
  }
};

inline const std::vector<ProductType>& product_types() {
  static const std::vector<ProductType> table = {
      {"machinery", "Machinery", true},
      {"toy", "Toy", true},
      {"recreational-craft-or-personal-watercraft",
       "Recreational craft or personal watercraft", true},
      {"lift", "Lift", true},
      {"equipment-for-potentially-explosive-atmospheres",
       "Equipment and protective systems for use in potentially explosive "
       "atmospheres",
       true},
      {"radio-equipment", "Radio equipment", true},
      {"pressure-equipment", "Pressure equipment", true},
      {"cableway-installation", "Cableway installation", true},
      {"personal-protective-equipment", "Personal protective equipment", true},
      {"appliances-burning-gaseous-fuels", "Appliances burning gaseous fuels",
       true},
      {"medical-device", "Medical device", true},
      {"in-vitro-diagnostic-medical-device",
       "In vitro diagnostic medical device", true},
      {"civil-aviation", "Civil aviation", true},
      {"2-or-3-wheel-vehicle-or-quadricycle",
       "2- or 3-wheel vehicle or quadricycle", true},
      {"agricultural-and-forestry-vehicle", "Agricultural and forestry vehicle",
       true},
      {"marine-equipment", "Marine equipment", true},
      {"interoperability-of-the-rail-system",
       "Interoperability of the rail system", true},
      {"motor-vehicles-and-their-trailers", "Motor vehicles and their trailers",
       true},
      {"other-hardware", "Other hardware product/system", false},
      {"other-software", "Other software product/system", false},
  };
  return table;
}

inline const std::vector<Area>& application_areas() {
  static const std::vector<Area> table = {
      {"biometrics",
       "Biometrics",
       {{"remote-biometric-identification",
         "Remote biometric identification systems", true}}},
      {"critical-infrastructure",
       "Critical infrastructure",
       {{"safety-components",
         "AI systems used as safety components in the management and "
         "operation of critical digital infrastructure, road traffic and the "
         "supply of water, gas, heating and electricity",
         true}}},
      {"education-and-vocational-training",
       "Education and vocational training",
       {{"access-and-admission",
         "AI systems used to determine access, admission or to assign "
         "natural persons to educational and vocational training "
         "institutions or programmes",
         true},
        {"evaluate-learning-outcomes",
         "AI systems intended to be used to evaluate learning outcomes",
         true}}},
      {"employment",
       "Employment, workers management and access to self-employment",
       {{"recruitment-and-selection",
         "AI systems used for recruitment or selection of natural persons, "
         "notably to place targeted job advertisements, to analyse and "
         "filter job applications, and to evaluate candidates",
         true},
        {"work-management-decisions",
         "AI systems to make decisions on promotion and termination of "
         "work-related relationships, to allocate tasks or monitor and "
         "evaluate performance based on person's behavior, personal traits "
         "or characteristics",
         true}}},
      {"access-to-essential-services",
       "Access to essential private services, public services and benefits",
       {{"public-assistance-eligibility",
         "AI systems used by public authorities to evaluate the eligibility "
         "of natural persons for essential public assistance benefits and "
         "services, and to grant, reduce, revoke or reclaim such benefits "
         "and services",
         true},
        {"creditworthiness-evaluation",
         "AI systems used to evaluate the creditworthiness of natural "
         "persons or establish their credit score",
         true},
        {"emergency-services-dispatch",
         "AI systems used to dispatch, or to establish priority in the "
         "dispatching of emergency first response services, including by "
         "firefighters and medical aid",
         true},
        {"life-and-health-insurance-pricing",
         "AI systems for risk assessment and pricing in the case of life "
         "and health insurance",
         true}}},
      {"law-enforcement",
       "Law enforcement",
       {{"offending-risk-assessment",
         "AI systems used by law enforcement to assess the risk of a "
         "natural person for offending or reoffending or the risk for a "
         "natural person to become a potential victim of criminal offences",
         true},
        {"polygraphs-and-emotion-detection",
         "AI systems used by law enforcement as polygraphs or to detect the "
         "emotional state of a natural person",
         true},
        {"evidence-reliability-evaluation",
         "AI systems used by law enforcement to evaluate the reliability of "
         "evidence in the course of investigation or prosecution of "
         "criminal offences",
         true},
        {"predictive-policing",
         "AI systems used by law enforcement to predict the (re)occurrence "
         "of a criminal offence based on profiling of natural persons or to "
         "assess personality traits and characteristics or past criminal "
         "behaviour",
         true},
        {"profiling-in-criminal-proceedings",
         "AI systems used by law enforcement to profile natural persons in "
         "the course of detection, investigation or prosecution of criminal "
         "offences",
         true}}},
      {"migration-asylum-and-border-control",
       "Migration, asylum and border control management",
       {{"polygraphs-and-emotion-detection",
         "AI systems used by public authorities as polygraphs or to detect "
         "the emotional state of a natural person",
         true},
        {"entry-risk-assessment",
         "AI systems used by public authorities to assess a risk (security "
         "risk, risk of irregular immigration, health risk) posed by a "
         "person who enters or has entered into the territory of a Member "
         "State",
         true},
        {"asylum-and-visa-application-examination",
         "AI systems to assist public authorities to examine applications "
         "for asylum, visa and residence permits and associated complaints",
         true}}},
      {"administration-of-justice",
       "Administration of justice and democratic processes",
       {{"judicial-interpretation",
         "AI systems used by a judicial authority to interpret facts or the "
         "law and to apply the law to a concrete set of facts",
         true}}},
      {"entertainment-and-leisure", "Entertainment and leisure", {}},
      {"marketing-and-retail", "Marketing and retail", {}},
      {"culture-art-and-heritage", "Culture, art and heritage", {}},
      {"clinical-use-in-medicine-and-healthcare",
       "Clinical use in medicine and healthcare",
       {}},
      {"finances-and-banking", "Finances and banking", {}},
      {"social-assistance", "Social assistance", {}},
      {"video-surveillance-for-security", "Video-surveillance for security",
       {}},
      {"transportation-and-mobility", "Transportation and mobility", {}},
      {"tourism-hospitality-and-restaurants",
       "Tourism, hospitality and restaurants", {}},
      {"industry-and-logistics", "Industry and logistics", {}},
      {"politics", "Politics", {}},
      {"other", "Other", {}},
  };
  return table;
}

inline const std::vector<Sdg>& sdgs() {
  static const std::vector<Sdg> table = {
      {1, "No poverty"},
      {2, "Zero hunger"},
      {3, "Good health and well-being"},
      {4, "Quality education"},
      {5, "Gender equality"},
      {6, "Clean water and sanitation"},
      {7, "Affordable and clean energy"},
      {8, "Decent work and economic growth"},
      {9, "Industry, innovation and infrastructure"},
      {10, "Reduced inequalities"},
      {11, "Sustainable cities and communities"},
      {12, "Responsible consumption and production"},
      {13, "Climate action"},
      {14, "Life below water"},
      {15, "Life on land"},
      {16, "Peace, justice and strong institutions"},
      {17, "Partnerships for the goals"},
  };
  return table;
}

namespace detail {

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string lower_copy(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](char c) { return ascii_lower(c); });
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
  return true;
}

// Levenshtein distance, case-folded; used only for error suggestions.
inline int edit_distance(std::string_view a, std::string_view b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      int sub = prev[j - 1] + (ascii_lower(a[i - 1]) != ascii_lower(b[j - 1]));
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::string quote_join(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += "'" + items[i] + "'";
  }
  return out;
}

}  // namespace detail

// The three nearest labels by edit distance, table order breaking ties.
inline std::vector<std::string> nearest_product_labels(std::string_view key,
                                                       int count = 3) {
  std::vector<std::pair<int, size_t>> ranked;
  const auto& table = product_types();
  for (size_t i = 0; i < table.size(); ++i)
    ranked.emplace_back(detail::edit_distance(key, table[i].label), i);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (int i = 0; i < count && i < static_cast<int>(ranked.size()); ++i)
    out.push_back(table[ranked[i].second].label);
  return out;
}

// Slug matches exactly; label matches case-insensitively.
inline const ProductType& lookup_product_type(std::string_view key) {
  for (const auto& p : product_types())
    if (p.id == key || detail::iequals(p.label, key)) return p;
  throw UnknownProductType("unknown product type '" + std::string(key) +
                           "' (closest: " +
                           detail::quote_join(nearest_product_labels(key)) +
                           ")");
}

inline const Area* find_area(std::string_view key) {
  for (const auto& a : application_areas())
    if (a.id == key || detail::iequals(a.label, key)) return &a;
  return nullptr;
}

inline ApplicationEntry lookup_application_subarea(
    std::string_view area_key, std::optional<std::string_view> subarea_key) {
  const Area* area = find_area(area_key);
  if (!area) throw UnknownArea("unknown application area '" +
                               std::string(area_key) + "'");
  if (!subarea_key || subarea_key->empty()) {
    if (!area->subareas.empty())
      throw MissingSubarea("application area '" + area->id + "' has " +
                           std::to_string(area->subareas.size()) +
                           " subareas; one must be named");
    return {area->id, area->label, "", "", false};
  }
  if (area->subareas.empty())
    throw UnknownSubarea("application area '" + area->id +
                         "' has no subareas, but '" + std::string(*subarea_key) +
                         "' was given");
  for (const auto& s : area->subareas)
    if (s.id == *subarea_key || detail::iequals(s.label, *subarea_key))
      return {area->id, area->label, s.id, s.label, s.annex_iii};
  throw UnknownSubarea("unknown subarea '" + std::string(*subarea_key) +
                       "' in application area '" + area->id + "'");
}

// Convenience over the raw reference form "area" / "area/subarea".
inline ApplicationEntry lookup_application_ref(const ApplicationRef& ref) {
  if (ref.subarea.empty()) return lookup_application_subarea(ref.area, std::nullopt);
  return lookup_application_subarea(ref.area, ref.subarea);
}

inline const Sdg& lookup_sdg(int number) {
  for (const auto& s : sdgs())
    if (s.number == number) return s;
  throw UnknownSdg("unknown SDG number " + std::to_string(number) +
                   " (valid range is 1..17)");
}

inline const Sdg& lookup_sdg(std::string_view key) {
  if (!key.empty() &&
      std::all_of(key.begin(), key.end(),
                  [](char c) { return c >= '0' && c <= '9'; })) {
    long n = 0;
    for (char c : key) {
      n = n * 10 + (c - '0');
      if (n > 1000) break;
    }
    return lookup_sdg(static_cast<int>(n));
  }
  for (const auto& s : sdgs())
    if (detail::iequals(s.name, key)) return s;
  throw UnknownSdg("unknown SDG '" + std::string(key) + "'");
}

// Cardinality sanity over the compiled-in tables; cheap enough to run at
// program start.
inline bool vocabularies_consistent() {
  const auto& products = product_types();
  if (products.size() != 20) return false;
  if (std::count_if(products.begin(), products.end(),
                    [](const ProductType& p) { return p.annex_ii; }) != 18)
    return false;
  const auto& areas = application_areas();
  if (areas.size() != 20) return false;
  int flagged = 0;
  for (const auto& a : areas)
    for (const auto& s : a.subareas)
      if (s.annex_iii) ++flagged;
  if (flagged != 19) return false;
  const auto& goals = sdgs();
  if (goals.size() != 17) return false;
  for (int n = 1; n <= 17; ++n)
    if (std::count_if(goals.begin(), goals.end(),
                      [n](const Sdg& s) { return s.number == n; }) != 1)
      return false;
  return true;
}

}  // namespace ucc
