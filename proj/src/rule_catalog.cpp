#include "smce/rule_catalog.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

#include "smce/errors.hpp"

namespace smce {

using CT = ConstraintType;
using nlohmann::json;

namespace {

constexpr ConstraintFlags SM{CT::SelfMap};
constexpr ConstraintFlags kNotTotal{CT::Total};

std::vector<CorollaryRecord> build_ledger() {
  const auto inc = CorollaryKind::Incoherence;
  const auto red = CorollaryKind::Redundancy;
  const auto rej = CorollaryKind::Rejection;
  std::vector<CorollaryRecord> v = {
      {"A.6.1.1 (i)", inc, "total ^ default", "A.6.1"},
      {"A.6.1.1 (ii)", inc, "non-prime ^ (one-to-one v bijective)", "A.6.1"},
      {"A.6.1.1 (iii)", inc, "canonical projection ^ (not total v non-prime)", "A.6.1"},
      {"A.6.1.1 (iv)", inc,
       "not self-map ^ (reflexive v irreflexive v symmetric v asymmetric v idempotent v equivalence v acyclic v "
       "representative system mapping)",
       "A.6.1"},
      {"A.6.1.1 (v)", inc,
       "canonical injection ^ (onto v not total v not one-to-one v not reflexive v not idempotent)", "A.6.1"},
      {"A.6.1.1 (vi)", inc, "self-map ^ reflexive ^ irreflexive", "A.6.1"},
      {"A.6.1.1 (vii)", inc, "self-map ^ symmetric ^ asymmetric", "A.6.1"},
      {"A.6.1.1 (viii)", inc, "non-prime ^ total ^ onto ^ self-map", "A.6.1"},
      {"A.6.1.1 (ix)", inc, "self-map ^ canonical projection", "A.6.1"},
      {"A.6.1.1 (x)", red, "one-to-one ^ onto => bijective", "A.6.1"},
      {"A.6.1.1 (xi)", red, "bijective => one-to-one ^ onto", "A.6.1"},
      {"A.6.1.1 (xii)", red, "self-map ^ reflexive ^ symmetric ^ idempotent => equivalence", "A.6.1"},
      {"A.6.1.1 (xiii)", red, "self-map ^ equivalence => reflexive ^ symmetric ^ idempotent", "A.6.1"},
      {"A.6.1.2 (i)", inc, "f one-to-one ^ g one-to-one ^ g o f non-prime", "A.6.1"},
      {"A.6.1.2 (ii)", red, "f one-to-one ^ g one-to-one => g o f one-to-one", "A.6.1"},
      {"A.6.1.2 (iii)", inc, "g o f one-to-one ^ (f non-prime v g|Im(f) non-prime)", "A.6.1"},
      {"A.6.1.2 (iv)", red, "g o f one-to-one => f one-to-one ^ g|Im(f) one-to-one", "A.6.1"},
      {"A.6.1.2 (v)", inc, "g o f one-to-one ^ f onto ^ g non-prime", "A.6.1"},
      {"A.6.1.2 (vi)", red, "g o f one-to-one ^ f onto => g one-to-one", "A.6.1"},
      {"A.6.1.2 (vii)", red, "f onto ^ g onto => g o f onto", "A.6.1"},
      {"A.6.1.2 (viii)", red, "g o f onto => g onto", "A.6.1"},
      {"A.6.1.2 (ix)", red, "g o f onto ^ g one-to-one => f onto", "A.6.1"},
      {"A.6.1.2 (x)", red, "g o f reflexive ^ g o f self-map => g onto", "A.6.1"},
      {"A.6.1.2 (xi)", red, "g o f reflexive ^ g o f self-map => f o g idempotent ^ f o g self-map", "A.6.1"},
      {"A.6.1.2 (xii)", red, "g o f idempotent ^ g o f self-map => f o g reflexive ^ f o g self-map", "A.6.1"},
      {"A.6.1.3", red, "h o g o f onto ^ h one-to-one => g onto", "A.6.1"},
      {"A.6.1.4 (i)", red, "self-map ^ total ^ onto <=> self-map ^ total ^ one-to-one", "A.6.1"},
      {"A.6.1.4 (ii)", red, "self-map ^ total ^ (onto v bijective) => self-map ^ total ^ one-to-one", "A.6.1"},
      {"A.6.2.1 (i)", rej, "self-map ^ total ^ equivalence", "A.6.2"},
      {"A.6.2.1 (ii)", rej, "self-map ^ total ^ single ^ reflexive", "A.6.2"},
      {"A.6.2.1 (iii)", rej, "self-map ^ total ^ one-to-one ^ representative system mapping", "A.6.2"},
      {"A.6.2.1 (iv)", rej, "self-map ^ total ^ symmetric ^ idempotent", "A.6.2"},
      {"A.6.2.1 (v)", inc, "self-map ^ one-to-one ^ idempotent", "A.6.2"},
      {"A.6.2.1 (vi)", red, "self-map ^ one-to-one ^ not unity => irreflexive", "A.6.2"},
      {"A.6.2.2 (i)", inc, "self-map ^ asymmetric ^ reflexive", "A.6.2"},
      {"A.6.2.2 (ii)", red, "self-map ^ asymmetric => irreflexive", "A.6.2"},
      {"A.6.2.2 (iii)", inc, "self-map ^ acyclic ^ (idempotent v symmetric v reflexive)", "A.6.2"},
      {"A.6.2.2 (iv)", red, "self-map ^ acyclic => asymmetric ^ irreflexive", "A.6.2"},
      {"A.6.2.3 (i)", inc, "self-map ^ irreflexive ^ idempotent ^ symmetric", "A.6.2"},
      {"A.6.2.3 (ii)", red, "self-map ^ irreflexive ^ idempotent => asymmetric", "A.6.2"},
      {"A.6.2.4", red, "self-map ^ asymmetric ^ idempotent => acyclic", "A.6.2"},
      {"A.6.2.5", red, "self-map ^ representative system mapping => idempotent", "A.6.2"},
      {"A.6.2.6 (i)", inc, "self-map ^ not total ^ reflexive ^ non-prime", "A.6.2"},
      {"A.6.2.6 (ii)", red, "self-map ^ not total ^ reflexive => one-to-one", "A.6.2"},
      {"A.6.2.6 (iii)", inc,
       "self-map ^ not total ^ representative system mapping ^ one-to-one ^ irreflexive", "A.6.2"},
      {"A.6.2.6 (iv)", red,
       "self-map ^ not total ^ representative system mapping ^ one-to-one => reflexive", "A.6.2"},
      {"A.6.2.6 (v)", inc, "self-map ^ not total ^ symmetric ^ idempotent ^ irreflexive", "A.6.2"},
      {"A.6.2.6 (vi)", red, "self-map ^ not total ^ symmetric ^ idempotent => reflexive", "A.6.2"},
  };
  return v;
}

std::vector<Pattern> build_trivial() {
  std::vector<Term> not_sm;
  for (auto t : {CT::Reflexive, CT::Irreflexive, CT::Symmetric, CT::Asymmetric, CT::Idempotent,
                 CT::Equivalence, CT::Acyclic, CT::RepresentativeSystemMapping})
    not_sm.push_back({t, SM});
  const ConstraintFlags CI{CT::CanonicalInjection};
  const ConstraintFlags CP{CT::CanonicalProjection};
  return {
      {"A.6.1.1 (i)", {{{CT::Total, CT::DefaultValue}, {}}}},
      {"A.6.1.1 (ii)", {{{CT::OneToOne, CT::NonPrime}, {}}, {{CT::Bijective, CT::NonPrime}, {}}}},
      {"A.6.1.1 (iii)", {{CP, kNotTotal}, {CP | CT::NonPrime, {}}}},
      {"A.6.1.1 (iv)", not_sm},
      {"A.6.1.1 (v)",
       {{CI | CT::Onto, {}}, {CI, CT::Total}, {CI, CT::OneToOne}, {CI, CT::Reflexive}, {CI, CT::Idempotent}}},
      {"A.6.1.1 (vi)", {{SM | CT::Reflexive | CT::Irreflexive, {}}}},
      {"A.6.1.1 (vii)", {{SM | CT::Symmetric | CT::Asymmetric | CT::Total, {}}}},
      {"A.6.1.1 (ix)", {{SM | CP, {}}}},
  };
}

std::vector<Pattern> build_incoherent() {
  const ConstraintFlags CI{CT::CanonicalInjection};
  return {
      {"A.6.1.1 (viii)", {{SM | CT::Total | CT::Onto | CT::NonPrime, {}}}},
      {"A.6.2.1 (v)", {{SM | CT::Total | CT::OneToOne | CT::Idempotent, CI}}},
      {"A.6.2.2 (i)", {{SM | CT::Asymmetric | CT::Reflexive, {}}}},
      {"A.6.2.2 (iii)",
       {{SM | CT::Acyclic | CT::Reflexive, {}},
        {SM | CT::Acyclic | CT::Idempotent | CT::Total, {}},
        {SM | CT::Acyclic | CT::Symmetric | CT::Total, {}}}},
      {"A.6.2.3 (i)", {{SM | CT::Irreflexive | CT::Idempotent | CT::Symmetric | CT::Total, {}}}},
      {"A.6.2.6 (i)", {{SM | CT::Reflexive | CT::NonPrime, kNotTotal}}},
      {"A.6.2.6 (iii)", {{SM | CT::RepresentativeSystemMapping | CT::OneToOne | CT::Irreflexive, kNotTotal}}},
  };
}

std::vector<RedundancyRule> build_rules() {
  const ConstraintFlags CI{CT::CanonicalInjection};
  return {
      {"A.6.1.1 (x)", {{CT::OneToOne, CT::Onto}, {}}, CT::Bijective},
      {"A.6.1.1 (xi)", {CT::Bijective, {}}, {CT::OneToOne, CT::Onto}},
      {"A.6.1.1 (xii)", {SM | CT::Reflexive | CT::Symmetric | CT::Idempotent, {}}, CT::Equivalence},
      {"A.6.1.1 (xiii)", {SM | CT::Equivalence, {}}, {CT::Reflexive, CT::Symmetric, CT::Idempotent}},
      {"A.6.1.4 (i)", {SM | CT::Total | CT::OneToOne, CI}, {CT::Onto, CT::Bijective}},
      {"A.6.1.4 (ii)", {SM | CT::Total | CT::Onto, CI}, CT::OneToOne},
      {"A.6.2.2 (ii)", {SM | CT::Asymmetric, {}}, CT::Irreflexive},
      {"A.6.2.2 (iv)", {SM | CT::Acyclic, {}}, {CT::Asymmetric, CT::Irreflexive}},
      {"A.6.2.3 (ii)", {SM | CT::Irreflexive | CT::Idempotent, {}}, CT::Asymmetric},
      {"A.6.2.4", {SM | CT::Asymmetric | CT::Idempotent, {}}, CT::Acyclic},
      {"A.6.2.5", {SM | CT::RepresentativeSystemMapping, {}}, CT::Idempotent},
      {"A.6.2.6 (ii)", {SM | CT::Reflexive, kNotTotal}, CT::OneToOne},
      {"A.6.2.6 (iv)", {SM | CT::RepresentativeSystemMapping | CT::OneToOne, kNotTotal}, CT::Reflexive},
  };
}

std::vector<RejectionRow> build_rejections() {
  const ConstraintFlags CI{CT::CanonicalInjection};
  return {
      {"A.6.2.1 (i)", {SM | CT::Total | CT::Equivalence, CI}, false},
      {"A.6.2.1 (ii)", {SM | CT::Total | CT::Reflexive, CI}, true},
      {"A.6.2.1 (iii)", {SM | CT::Total | CT::OneToOne | CT::RepresentativeSystemMapping, CI}, false},
      {"A.6.2.1 (iv)", {SM | CT::Total | CT::Symmetric | CT::Idempotent, CI}, false},
  };
}

ConstraintFlags derivable_types() {
  ConstraintFlags out;
  for (const auto& r : redundancy_rules()) out |= r.conclusion;
  return out;
}

int bit(ConstraintType t) { return __builtin_ctz(weight(t)); }

}  // namespace

std::string_view to_string(CorollaryKind k) noexcept {
  switch (k) {
    case CorollaryKind::Incoherence: return "Incoherence";
    case CorollaryKind::Redundancy: return "Redundancy";
    case CorollaryKind::Rejection: return "Rejection";
  }
  return "";
}

std::string_view to_string(VerdictKind k) noexcept {
  switch (k) {
    case VerdictKind::TriviallyIncoherent: return "trivially incoherent";
    case VerdictKind::Incoherent: return "incoherent";
    case VerdictKind::Rejected: return "rejected";
    case VerdictKind::Coherent: return "coherent";
  }
  return "";
}

const std::vector<CorollaryRecord>& corollary_ledger() {
  static const auto v = build_ledger();
  return v;
}

int corollary_ordinal(std::string_view id) {
  static const auto index = [] {
    std::unordered_map<std::string, int> m;
    const auto& l = corollary_ledger();
    for (std::size_t i = 0; i < l.size(); ++i) m.emplace(l[i].id, static_cast<int>(i));
    return m;
  }();
  auto it = index.find(std::string(id));
  if (it == index.end()) throw NotFoundError("unknown corollary " + std::string(id));
  return it->second;
}

const CorollaryRecord& find_corollary(std::string_view id) {
  return corollary_ledger()[static_cast<std::size_t>(corollary_ordinal(id))];
}

std::string render_note(std::string_view id) {
  const auto& c = find_corollary(id);
  return c.id + ". " + c.description;
}

bool Pattern::matches(ConstraintFlags f) const noexcept {
  return std::any_of(any.begin(), any.end(), [&](const Term& t) { return t.matches(f); });
}

const std::vector<Pattern>& trivial_patterns() {
  static const auto v = build_trivial();
  return v;
}

const std::vector<Pattern>& incoherence_patterns() {
  static const auto v = build_incoherent();
  return v;
}

const std::vector<RedundancyRule>& redundancy_rules() {
  static const auto v = build_rules();
  return v;
}

const std::vector<RejectionRow>& rejection_patterns() {
  static const auto v = build_rejections();
  return v;
}

Derivation derive(ConstraintFlags f) {
  Derivation d;
  d.full = f;
  d.rule_of.fill(-1);
  const auto& rules = redundancy_rules();
  while (true) {
    ConstraintFlags added;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const auto& r = rules[i];
      if (!r.premise.matches(d.full)) continue;
      auto fresh = r.conclusion - d.full - added;
      for (auto t : fresh.members()) d.rule_of[static_cast<std::size_t>(bit(t))] = static_cast<int>(i);
      added |= fresh;
    }
    if (added.empty()) break;
    d.full |= added;
  }
  return d;
}

Closure closure_of(ConstraintFlags f, const BasisPreference& pref) {
  static const ConstraintFlags candidates_mask = derivable_types();
  const ConstraintFlags onto_like{CT::Onto, CT::Bijective};
  const auto given = pref.given;
  Closure c;
  auto d = derive(f | given);
  ConstraintFlags basis = f - given;
  if (d.full.contains_all(SM | CT::Total) && !d.full.contains(CT::CanonicalInjection) && basis.intersects(onto_like)) {
    c.replaced = basis & onto_like;
    basis = (basis - onto_like) | CT::OneToOne;
  }
  std::vector<ConstraintType> order;
  for (auto t : (basis & pref.demote_first & candidates_mask).members()) order.push_back(t);
  for (auto t : ((basis - pref.demote_first) & candidates_mask).members()) order.push_back(t);
  for (auto t : order) {
    if (pref.keep.contains(t) && !c.replaced.contains(t)) continue;
    auto without = basis - t;
    if (derive(without | given).full.contains(t)) basis = without;
  }
  auto r = derive(basis | given);
  auto own = given.empty() ? r : derive(basis);
  c.full = r.full;
  c.basis = basis;
  const auto& rules = redundancy_rules();
  auto rule_note = [&](const Derivation& x, ConstraintType t) {
    return rules[static_cast<std::size_t>(x.rule_of[static_cast<std::size_t>(bit(t))])].corollary;
  };
  for (auto t : (r.full - basis).members()) {
    std::string note;
    if (c.replaced.contains(t))
      note = "A.6.1.4 (ii)";
    else if (given.contains(t))
      note = own.full.contains(t) ? rule_note(own, t) : std::string();
    else
      note = rule_note(r, t);
    c.redundant.push_back({t, std::move(note)});
  }
  return c;
}

std::optional<std::string> trivial_note(ConstraintFlags f) {
  for (const auto& p : trivial_patterns())
    if (p.matches(f)) return p.corollary;
  return std::nullopt;
}

std::optional<std::string> incoherence_note(ConstraintFlags f) {
  for (const auto& p : incoherence_patterns())
    if (p.matches(f)) return p.corollary;
  auto full = derive(f).full;
  if (full == f) return std::nullopt;
  if (auto n = trivial_note(full)) return n;
  for (const auto& p : incoherence_patterns())
    if (p.matches(full)) return p.corollary;
  return std::nullopt;
}

const CoherenceRow* RuleCatalog::row(CombinationCode x) const {
  if (x.value > kMaxCombinationCode || index_.empty()) return nullptr;
  auto i = index_[x.value];
  return i < 0 ? nullptr : &coherence_[static_cast<std::size_t>(i)];
}

std::span<const RedundancyRow> RuleCatalog::redundancies(CombinationCode x) const {
  auto* r = row(x);
  if (!r) return {};
  const auto& g = ranges_[static_cast<std::size_t>(index_[x.value])];
  return std::span<const RedundancyRow>(redundancies_).subspan(g.red_begin, g.red_end - g.red_begin);
}

std::span<const RedundancyRow> RuleCatalog::additional(CombinationCode x) const {
  auto* r = row(x);
  if (!r) return {};
  const auto& g = ranges_[static_cast<std::size_t>(index_[x.value])];
  return std::span<const RedundancyRow>(additional_).subspan(g.add_begin, g.add_end - g.add_begin);
}

RuleCatalog generate_catalog() {
  RuleCatalog cat;
  cat.corollaries_ = corollary_ledger();
  cat.rejections_ = rejection_patterns();
  cat.index_.assign(kMaxCombinationCode + 1, -1);
  const auto& rules = redundancy_rules();
  for (std::uint32_t x = 1; x <= kMaxCombinationCode; ++x) {
    ++cat.enumerated_;
    auto f = ConstraintFlags::from_bits(x);
    if (trivial_note(f)) continue;
    CoherenceRow row{{x}, true, std::nullopt};
    RuleCatalog::Range range;
    range.red_begin = range.red_end = static_cast<std::uint32_t>(cat.redundancies_.size());
    range.add_begin = range.add_end = static_cast<std::uint32_t>(cat.additional_.size());
    if (auto n = incoherence_note(f)) {
      row.coherent = false;
      row.note = std::move(n);
    } else {
      auto c = closure_of(f);
      int best = -1;
      for (const auto& imp : c.redundant) {
        cat.redundancies_.push_back({{x}, imp.flag, imp.note});
        int ord = corollary_ordinal(imp.note);
        if (best < 0 || ord < best) best = ord;
        for (const auto& r : rules) {
          if (r.corollary == imp.note || !r.conclusion.contains(imp.flag)) continue;
          if (r.premise.required.contains(imp.flag) || !r.premise.matches(c.full)) continue;
          cat.additional_.push_back({{x}, imp.flag, r.corollary});
        }
      }
      if (best >= 0) row.note = corollary_ledger()[static_cast<std::size_t>(best)].id;
      range.red_end = static_cast<std::uint32_t>(cat.redundancies_.size());
      range.add_end = static_cast<std::uint32_t>(cat.additional_.size());
    }
    cat.index_[x] = static_cast<std::int32_t>(cat.coherence_.size());
    cat.coherence_.push_back(std::move(row));
    cat.ranges_.push_back(range);
  }
  return cat;
}

const RuleCatalog& default_catalog() {
  static const RuleCatalog cat = generate_catalog();
  return cat;
}

Verdict lookup(const RuleCatalog& cat, CombinationCode x, Compoundness compoundness) {
  Verdict v;
  auto f = decode(x);
  if (f.empty()) return v;
  auto* row = cat.row(x);
  if (!row) {
    v.kind = VerdictKind::TriviallyIncoherent;
    v.note = trivial_note(f);
    return v;
  }
  if (!row->coherent) {
    v.kind = VerdictKind::Incoherent;
    v.note = row->note;
    return v;
  }
  auto full = derive(f).full;
  for (const auto& r : cat.rejection_rows())
    if (r.matches(full, compoundness)) {
      v.kind = VerdictKind::Rejected;
      v.note = r.note;
      return v;
    }
  for (const auto& r : cat.redundancies(x)) v.redundant.push_back({r.redundant, r.note});
  for (const auto& r : cat.additional(x)) v.additional.push_back({r.redundant, r.note});
  return v;
}

Closure redundancy_closure(const RuleCatalog& cat, ConstraintFlags flags, const BasisPreference& pref) {
  auto v = lookup(cat, encode(flags), Compoundness::Compound);
  if (v.kind == VerdictKind::TriviallyIncoherent || v.kind == VerdictKind::Incoherent)
    throw CoherenceError("constraint set {" + format_flags(flags) + "} is incoherent according to " +
                         v.note.value_or("?"));
  return closure_of(flags, pref);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void write_corollaries_csv(std::ostream& os, const RuleCatalog& cat) {
  os << "CorId,CorType,CorDescription,CorSection\n";
  for (const auto& c : cat.corollaries())
    os << csv_field(c.id) << ',' << to_string(c.kind) << ',' << csv_field(c.description) << ',' << c.section
       << '\n';
}

void write_coherencies_csv(std::ostream& os, const RuleCatalog& cat) {
  os << "x,Ch";
  for (auto it = kAllConstraintTypes.rbegin(); it != kAllConstraintTypes.rend(); ++it) os << ',' << abbreviation(*it);
  os << ",Notes\n";
  for (const auto& r : cat.coherence_rows()) {
    auto f = decode(r.x);
    os << r.x.value << ',' << (r.coherent ? 1 : 0);
    for (auto it = kAllConstraintTypes.rbegin(); it != kAllConstraintTypes.rend(); ++it)
      os << ',' << (f.contains(*it) ? 1 : 0);
    os << ',' << csv_field(r.note.value_or("")) << '\n';
  }
}

void write_redundancies_csv(std::ostream& os, const RuleCatalog& cat) {
  os << "SMCCombination,Redundancy,Notes\n";
  for (const auto& r : cat.redundancy_rows())
    os << r.x.value << ',' << display_name(r.redundant) << ',' << csv_field(r.note) << '\n';
}

json verdict_to_json(const Verdict& v) {
  json j;
  j["verdict"] = std::string(to_string(v.kind));
  if (v.note) {
    j["note"] = *v.note;
    j["description"] = find_corollary(*v.note).description;
  }
  if (v.kind == VerdictKind::Coherent) {
    auto list = [](const std::vector<ImpliedFlag>& xs) {
      json a = json::array();
      for (const auto& i : xs) a.push_back({{"flag", std::string(abbreviation(i.flag))}, {"note", i.note}});
      return a;
    };
    j["redundant"] = list(v.redundant);
    j["additional"] = list(v.additional);
  }
  return j;
}

json catalog_to_json(const RuleCatalog& cat) {
  json j;
  json cors = json::array();
  for (const auto& c : cat.corollaries())
    cors.push_back({{"id", c.id}, {"kind", std::string(to_string(c.kind))}, {"description", c.description},
                    {"section", c.section}});
  j["corollaries"] = std::move(cors);
  json rows = json::array();
  for (const auto& r : cat.coherence_rows()) {
    json row = {{"x", r.x.value}, {"coherent", r.coherent}, {"flags", format_flags(decode(r.x))}};
    row["note"] = r.note ? json(*r.note) : json(nullptr);
    rows.push_back(std::move(row));
  }
  j["coherencies"] = std::move(rows);
  auto red = [](const std::vector<RedundancyRow>& v) {
    json a = json::array();
    for (const auto& r : v)
      a.push_back({{"x", r.x.value}, {"redundancy", std::string(abbreviation(r.redundant))}, {"note", r.note}});
    return a;
  };
  j["redundancies"] = red(cat.redundancy_rows());
  j["additional_redundancies"] = red(cat.additional_rows());
  json rej = json::array();
  for (const auto& r : cat.rejection_rows())
    rej.push_back({{"note", r.note},
                   {"flags", format_flags(r.pattern.required)},
                   {"excluded", format_flags(r.pattern.forbidden)},
                   {"single_only", r.single_only}});
  j["rejections"] = std::move(rej);
  j["enumerated"] = cat.enumerated();
  return j;
}

}  // namespace smce
