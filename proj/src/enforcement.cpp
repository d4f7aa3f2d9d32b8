#include "smce/enforcement.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "smce/errors.hpp"

namespace smce {

using CT = ConstraintType;
using nlohmann::json;

std::string_view to_string(OutcomeStatus s) noexcept {
  switch (s) {
    case OutcomeStatus::Accepted: return "Accepted";
    case OutcomeStatus::RejectedIncoherent: return "RejectedIncoherent";
    case OutcomeStatus::RejectedTrivial: return "RejectedTrivial";
    case OutcomeStatus::RejectedUnity: return "RejectedUnity";
    case OutcomeStatus::RejectedUnsatisfied: return "RejectedUnsatisfied";
    case OutcomeStatus::RejectedRedundantRemoval: return "RejectedRedundantRemoval";
  }
  return "";
}

std::string_view to_string(PlanAction a) noexcept {
  return a == PlanAction::InstallCheck ? "install-check" : "remove-check";
}

std::string message_for(OutcomeStatus status, ConstraintType c, std::string_view mapping,
                        const std::optional<std::string>& note, Operation op) {
  std::string cs(display_name(c));
  std::string f(mapping);
  std::string notes = note && !note->empty() ? render_note(*note) : std::string("?");
  std::string verb = op == Operation::Add ? " cannot be added" : " cannot be removed";
  switch (status) {
    case OutcomeStatus::Accepted: return "";
    case OutcomeStatus::RejectedIncoherent:
      return cs + verb + ", as, according to " + notes + ", the constraint set of " + f + " would become incoherent!";
    case OutcomeStatus::RejectedTrivial:
      return cs + verb + ", as the constraint set of " + f + " would become incoherent!";
    case OutcomeStatus::RejectedUnity:
      return cs + verb + ", as, according to " + notes + ", " + f + " would become a unity mapping!";
    case OutcomeStatus::RejectedUnsatisfied:
      return cs + " cannot be added to the constraint set of " + f + ", as its current instance does not satisfy it!";
    case OutcomeStatus::RejectedRedundantRemoval:
      return cs + " cannot be removed as it is implied by other constraints, according to " + notes;
  }
  return "";
}

EnforcementPlan plan_between(const ConstraintState& before, const ConstraintState& after) {
  EnforcementPlan p;
  p.mapping = after.mapping;
  auto a = before.asserted() - kSystemFlags;
  auto b = after.asserted() - kSystemFlags;
  for (auto t : (a - b).members()) p.deltas.push_back({t, PlanAction::RemoveCheck});
  for (auto t : (b - a).members()) p.deltas.push_back({t, PlanAction::InstallCheck});
  return p;
}

namespace {

Compoundness compoundness_of(const MappingDescriptor& d) {
  return d.is_compound() ? Compoundness::Compound : Compoundness::Single;
}

struct External {
  std::string note;
  MappingId via{};
};

using ExternalMap = std::map<CT, External>;

ConstraintFlags flags_of(const ExternalMap& m) {
  ConstraintFlags f;
  for (const auto& [t, e] : m) f.insert(t);
  return f;
}

ExternalMap externals_of(const ConstraintState& s) {
  ExternalMap m;
  for (const auto& x : s.members)
    if (x.provenance == Provenance::Implied && x.via) m[x.type] = {x.note.value_or(""), *x.via};
  return m;
}

// Members from a closure: basis asserted, the rest implied; given flags take their external note.
ConstraintState build_state(MappingId id, const Closure& cl, const ExternalMap& ext) {
  ConstraintState s(id);
  for (auto t : cl.basis.members()) s.members.push_back({t, Provenance::Asserted, std::nullopt, std::nullopt});
  for (const auto& imp : cl.redundant) {
    Member m{imp.flag, Provenance::Implied, imp.note, std::nullopt};
    if (imp.note.empty()) {
      const auto& e = ext.at(imp.flag);
      m.note = e.note;
      m.via = e.via;
    }
    s.members.push_back(std::move(m));
  }
  s.sort();
  return s;
}

Outcome reject(Outcome o, OutcomeStatus st, ConstraintType c, const MappingDescriptor& d,
               std::optional<std::string> note, Operation op = Operation::Add) {
  o.status = st;
  o.note = std::move(note);
  o.message = message_for(st, c, d.name, o.note, op);
  return o;
}

std::optional<OutcomeStatus> status_of(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::TriviallyIncoherent: return OutcomeStatus::RejectedTrivial;
    case VerdictKind::Incoherent: return OutcomeStatus::RejectedIncoherent;
    case VerdictKind::Rejected: return OutcomeStatus::RejectedUnity;
    case VerdictKind::Coherent: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Outcome add_constraint(const ConstraintState& state, ConstraintType c, const MappingInstance* instance,
                       const RuleCatalog& cat, const MappingDescriptor& desc) {
  if (is_system(c)) throw ArgumentError(std::string(display_name(c)) + " is a system constraint and is read-only");
  if (desc.system.unity) throw ReadOnlyError("unity mapping " + desc.name + " is read-only");
  if (state.has(c))
    throw ArgumentError(std::string(display_name(c)) + " is already in the constraint set of " + desc.name);
  Outcome o;
  o.state = state;
  auto all = state.all() | c;
  auto v = lookup(cat, encode(all), compoundness_of(desc));
  ++o.work.lookups;
  if (auto st = status_of(v)) return reject(std::move(o), *st, c, desc, v.note);
  if (instance) {
    ++o.work.scans;
    auto bad = violations(*instance, all) - violations(*instance, state.all());
    if (!bad.empty()) return reject(std::move(o), OutcomeStatus::RejectedUnsatisfied, c, desc, std::nullopt);
  } else {
    o.unchecked = true;
  }
  auto ext = externals_of(state);
  BasisPreference pref;
  pref.keep = ConstraintFlags{c} | kSystemFlags;
  pref.given = flags_of(ext);
  auto cl = closure_of(state.asserted() | c | pref.given, pref);
  ++o.work.closures;
  o.state = build_state(state.mapping, cl, ext);
  o.plans.push_back(plan_between(state, o.state));
  return o;
}

Outcome remove_constraint(const ConstraintState& state, ConstraintType c, const RuleCatalog& cat,
                          const MappingDescriptor& desc) {
  if (is_system(c)) throw ArgumentError(std::string(display_name(c)) + " is a system constraint and is read-only");
  if (desc.system.unity) throw ReadOnlyError("unity mapping " + desc.name + " is read-only");
  const auto* m = state.find(c);
  if (!m) throw NotFoundError(std::string(display_name(c)) + " is not in the constraint set of " + desc.name);
  Outcome o;
  o.state = state;
  if (m->provenance == Provenance::Implied)
    return reject(std::move(o), OutcomeStatus::RejectedRedundantRemoval, c, desc, m->note, Operation::Remove);
  auto ext = externals_of(state);
  BasisPreference pref;
  pref.keep = state.asserted();
  pref.given = flags_of(ext);
  auto cl = closure_of((state.asserted() - c) | pref.given, pref);
  ++o.work.closures;
  auto v = lookup(cat, encode(cl.full), compoundness_of(desc));
  ++o.work.lookups;
  if (auto st = status_of(v)) return reject(std::move(o), *st, c, desc, v.note, Operation::Remove);
  o.state = build_state(state.mapping, cl, ext);
  o.plans.push_back(plan_between(state, o.state));
  return o;
}

namespace {

struct Fixpoint {
  std::map<MappingId, ConstraintFlags> full;
  std::map<MappingId, ExternalMap> ext;
  std::map<MappingId, std::vector<std::string>> annotations;
};

class CrossEngine {
 public:
  CrossEngine(const Metacatalog& meta, std::vector<MappingId> ids) : meta_(meta), ids_(std::move(ids)) {
    for (auto id : ids_) {
      const auto& d = meta.mapping(id);
      for (auto m : d.members)
        if (!meta.mappings().count(m))
          throw IntegrityError("compound " + d.name + " references missing member " + std::to_string(to_int(m)));
      if (d.is_compound()) compounds_.push_back(id);
      instances_[id] = meta.instance(id);
    }
  }

  Fixpoint run(const std::map<MappingId, ConstraintFlags>& asserted) const {
    Fixpoint fx;
    while (true) {
      for (auto id : ids_) fx.full[id] = derive(asserted.at(id) | flags_of(fx.ext[id])).full;
      fx.annotations.clear();
      bool changed = false;
      for (auto cm : compounds_) changed |= apply(cm, fx);
      if (!changed) break;
    }
    return fx;
  }

 private:
  const MappingDescriptor& d(MappingId id) const { return meta_.mapping(id); }

  bool participates(MappingId id) const {
    return std::find(ids_.begin(), ids_.end(), id) != ids_.end() && !d(id).system.unity;
  }

  // Declared total, or an instance that is total; with no instance the totality is assumed and annotated.
  bool total_or_assumed(MappingId id, const Fixpoint& fx, std::vector<std::string>& notes) const {
    auto it = fx.full.find(id);
    if (it != fx.full.end() && it->second.contains(CT::Total)) return true;
    const auto& inst = instances_.at(id);
    if (inst) return graph::total(inst->graph());
    notes.push_back("assumed " + d(id).name + " total (no instance)");
    return true;
  }

  bool exact(MappingId outer, MappingId inner) const { return d(inner).codomain == d(outer).domain; }

  bool add(Fixpoint& fx, MappingId target, CT t, const char* note, MappingId via, std::vector<std::string> notes) const {
    if (!participates(target)) return false;
    auto& e = fx.ext[target];
    auto& ann = fx.annotations[target];
    for (auto& n : notes) {
      auto s = d(target).name + " " + std::string(abbreviation(t)) + " via " + d(via).name + ": " + n;
      if (std::find(ann.begin(), ann.end(), s) == ann.end()) ann.push_back(std::move(s));
    }
    if (e.count(t)) return false;
    e[t] = {note, via};
    return true;
  }

  bool apply(MappingId cm, Fixpoint& fx) const {
    const auto& desc = d(cm);
    const auto& ms = desc.members;
    const auto n = ms.size();
    const auto& full = fx.full;
    auto fl = [&](MappingId id) { return full.at(id); };
    bool changed = false;
    auto all_links_exact = [&] {
      for (std::size_t i = 0; i + 1 < n; ++i)
        if (!exact(ms[i], ms[i + 1])) return false;
      return true;
    };
    auto cmf = fl(cm);

    if (std::all_of(ms.begin(), ms.end(), [&](MappingId m) { return fl(m).contains(CT::OneToOne); }))
      changed |= add(fx, cm, CT::OneToOne, "A.6.1.2 (ii)", cm, {});

    if (cmf.contains(CT::OneToOne)) {
      std::vector<std::string> notes;
      bool ok = true;
      for (std::size_t i = 0; i + 1 < n && ok; ++i) ok = total_or_assumed(ms[i], fx, notes);
      if (ok) {
        if (n == 2) notes.push_back(restriction_note(ms[0], ms[1]));
        changed |= add(fx, ms[n - 1], CT::OneToOne, "A.6.1.2 (iv)", cm, std::move(notes));
      }
    }

    if (n == 2 && cmf.contains(CT::OneToOne) && fl(ms[1]).contains(CT::Onto) && exact(ms[0], ms[1]))
      changed |= add(fx, ms[0], CT::OneToOne, "A.6.1.2 (vi)", cm, {});

    if (all_links_exact() &&
        std::all_of(ms.begin(), ms.end(), [&](MappingId m) { return fl(m).contains(CT::Onto); }))
      changed |= add(fx, cm, CT::Onto, "A.6.1.2 (vii)", cm, {});

    if (cmf.contains(CT::Onto)) changed |= add(fx, ms[0], CT::Onto, "A.6.1.2 (viii)", cm, {});

    if (n == 2 && cmf.contains(CT::Onto) && fl(ms[0]).contains(CT::OneToOne) && exact(ms[0], ms[1])) {
      std::vector<std::string> notes;
      if (total_or_assumed(ms[0], fx, notes))
        changed |= add(fx, ms[1], CT::Onto, "A.6.1.2 (ix)", cm, std::move(notes));
    }

    if (n == 3 && cmf.contains(CT::Onto) && fl(ms[0]).contains(CT::OneToOne) && all_links_exact()) {
      std::vector<std::string> notes;
      if (total_or_assumed(ms[0], fx, notes)) changed |= add(fx, ms[1], CT::Onto, "A.6.1.3", cm, std::move(notes));
    }

    const ConstraintFlags total_reflexive{CT::SelfMap, CT::Total, CT::Reflexive};
    if (cmf.contains_all(total_reflexive) && desc.domain == desc.codomain) {
      changed |= add(fx, ms[0], CT::Onto, "A.6.1.2 (x)", cm, {});
      if (n == 2)
        if (auto rev = reverse_of(cm)) changed |= add(fx, *rev, CT::Idempotent, "A.6.1.2 (xi)", cm, {});
    }
    return changed;
  }

  std::string restriction_note(MappingId outer, MappingId inner) const {
    const auto& g = instances_.at(outer);
    const auto& f = instances_.at(inner);
    auto gi = d(outer).name + "|Im(" + d(inner).name + ") one-to-one";
    if (!g || !f) return gi + " unverifiable (no instance)";
    auto r = restrict(*g, image(*f));
    return gi + (check_constraint(r, CT::OneToOne) ? " verified" : " violated by the instance");
  }

  std::optional<MappingId> reverse_of(MappingId cm) const {
    const auto& ms = d(cm).members;
    for (auto id : compounds_) {
      const auto& o = d(id).members;
      if (o.size() == 2 && o[0] == ms[1] && o[1] == ms[0]) return id;
    }
    return std::nullopt;
  }

  const Metacatalog& meta_;
  std::vector<MappingId> ids_;
  std::vector<MappingId> compounds_;
  std::map<MappingId, std::optional<MappingInstance>> instances_;
};

// The incoherence form whose premise the cross rule completed.
std::string incoherence_form(const std::string& note) {
  if (note == "A.6.1.2 (ii)") return "A.6.1.2 (i)";
  if (note == "A.6.1.2 (iv)") return "A.6.1.2 (iii)";
  if (note == "A.6.1.2 (vi)") return "A.6.1.2 (v)";
  return {};
}

std::vector<Outcome> propagate(Metacatalog& meta, DatabaseId db, std::optional<MappingId> trigger,
                               std::optional<ConstraintType> keep, const RuleCatalog& cat) {
  std::vector<MappingId> ids;
  for (auto id : meta.mappings_of(db))
    if (!meta.mapping(id).system.unity) ids.push_back(id);
  CrossEngine engine(meta, ids);

  std::map<MappingId, ConstraintFlags> asserted;
  for (auto id : ids) asserted[id] = meta.state(id).asserted();
  auto fx = engine.run(asserted);

  for (auto id : ids) {
    for (auto t : (asserted[id] - kSystemFlags).members()) {
      if (trigger && keep && id == *trigger && t == *keep) continue;
      auto trial = asserted;
      trial[id] -= t;
      auto f2 = engine.run(trial);
      if (f2.full[id].contains(t)) {
        asserted = std::move(trial);
        fx = std::move(f2);
      }
    }
  }

  std::vector<Outcome> changed;
  std::optional<Outcome> rejection;
  for (auto id : ids) {
    const auto& desc = meta.mapping(id);
    const auto& old = meta.state(id);
    const auto& ext = fx.ext[id];
    BasisPreference pref;
    pref.keep = asserted[id];
    pref.given = flags_of(ext) - asserted[id];
    ExternalMap given_ext;
    for (const auto& [t, e] : ext)
      if (pref.given.contains(t)) given_ext[t] = e;
    auto cl = closure_of(asserted[id] | pref.given, pref);
    auto next = build_state(id, cl, given_ext);
    if (next == old) continue;
    Outcome o;
    o.state = next;
    o.work.closures = 1;
    auto v = lookup(cat, encode(next.all()), desc.is_compound() ? Compoundness::Compound : Compoundness::Single);
    o.work.lookups = 1;
    if (auto st = status_of(v); st && !rejection) {
      auto fresh = next.all() - old.all();
      auto c = fresh.empty() ? next.all().members().front() : fresh.members().front();
      std::optional<std::string> note = v.note;
      for (auto t : fresh.members())
        if (auto it = given_ext.find(t); it != given_ext.end()) {
          if (auto form = incoherence_form(it->second.note); !form.empty() && st == OutcomeStatus::RejectedIncoherent) {
            note = form;
            c = t;
          }
          break;
        }
      o.state = old;
      o.status = *st;
      o.note = note;
      o.message = message_for(*st, c, desc.name, note);
      rejection = std::move(o);
      continue;
    }
    auto plan = plan_between(old, next);
    if (auto it = fx.annotations.find(id); it != fx.annotations.end()) plan.annotations = it->second;
    o.plans.push_back(std::move(plan));
    changed.push_back(std::move(o));
  }
  if (rejection) {
    std::vector<Outcome> out{std::move(*rejection)};
    return out;
  }
  for (const auto& o : changed) meta.set_state(o.state);
  return changed;
}

}  // namespace

std::vector<Outcome> propagate_composition(Metacatalog& meta, MappingId changed, const RuleCatalog& cat,
                                           std::optional<ConstraintType> keep) {
  return propagate(meta, meta.mapping(changed).database, changed, keep, cat);
}

std::vector<Outcome> reconcile_database(Metacatalog& meta, DatabaseId db, const RuleCatalog& cat) {
  meta.database(db);
  return propagate(meta, db, std::nullopt, std::nullopt, cat);
}

namespace {

ToggleResult finish(Metacatalog& meta, Metacatalog& work, MappingId id, Outcome first,
                    std::optional<ConstraintType> keep, const RuleCatalog& cat) {
  ToggleResult r;
  r.unchecked = first.unchecked;
  if (!first.accepted()) {
    r.status = first.status;
    r.message = first.message;
    r.note = first.note;
    r.outcomes.push_back(std::move(first));
    return r;
  }
  auto before = meta.state(id);
  work.set_state(first.state);
  auto rest = propagate_composition(work, id, cat, keep);
  if (!rest.empty() && !rest.front().accepted()) {
    r.status = rest.front().status;
    r.message = rest.front().message;
    r.note = rest.front().note;
    first.status = r.status;
    first.message = r.message;
    first.note = r.note;
    first.state = before;
    first.plans.clear();
    r.outcomes.push_back(std::move(first));
    r.outcomes.push_back(std::move(rest.front()));
    return r;
  }
  first.state = work.state(id);
  first.plans = {plan_between(before, first.state)};
  for (auto& o : rest)
    if (o.state.mapping == id) {
      first.plans.front().annotations = o.plans.front().annotations;
      first.work.closures += o.work.closures;
      first.work.lookups += o.work.lookups;
    }
  r.outcomes.push_back(std::move(first));
  for (auto& o : rest)
    if (o.state.mapping != id) r.outcomes.push_back(std::move(o));
  for (const auto& o : r.outcomes) r.plans.insert(r.plans.end(), o.plans.begin(), o.plans.end());
  meta = std::move(work);
  return r;
}

}  // namespace

ToggleResult toggle_constraint(Metacatalog& meta, MappingId id, ConstraintType c, bool desired,
                               const RuleCatalog& cat) {
  const auto& desc = meta.mapping(id);
  if (desc.system.unity) throw ReadOnlyError("unity mapping " + desc.name + " is read-only");
  if (is_system(c)) throw ArgumentError(std::string(display_name(c)) + " is a system constraint and is read-only");
  const auto& state = meta.state(id);
  if (state.has(c) == desired) {
    ToggleResult r;
    r.noop = true;
    Outcome o;
    o.state = state;
    r.outcomes.push_back(std::move(o));
    return r;
  }
  Metacatalog work = meta;
  if (desired) {
    auto inst = meta.instance(id);
    auto o = add_constraint(state, c, inst ? &*inst : nullptr, cat, desc);
    return finish(meta, work, id, std::move(o), c, cat);
  }
  auto o = remove_constraint(state, c, cat, desc);
  return finish(meta, work, id, std::move(o), std::nullopt, cat);
}

ToggleResult retype_mapping(Metacatalog& meta, MappingId id, const RetypeRequest& req, const RuleCatalog& cat) {
  auto desc = meta.mapping(id);
  if (desc.system.unity) throw ReadOnlyError("unity mapping " + desc.name + " is read-only");
  if (req.inclusion) desc.inclusion = *req.inclusion;
  if (req.canonical_projection) desc.system.canonical_projection = *req.canonical_projection;
  if (req.canonical_injection) desc.system.canonical_injection = *req.canonical_injection;
  if (desc.system.canonical_injection) desc.inclusion = true;
  const auto& state = meta.state(id);
  ConstraintFlags sys;
  if (desc.is_self_map()) sys |= CT::SelfMap;
  if (desc.system.canonical_projection) sys |= CT::CanonicalProjection;
  if (desc.system.canonical_injection) sys |= CT::CanonicalInjection;
  auto asserted = (state.asserted() - kSystemFlags) | sys;
  if (desc.system.canonical_projection) asserted |= CT::Total;
  if (desc.system.canonical_injection)
    asserted |= ConstraintFlags{CT::Total, CT::OneToOne, CT::Reflexive, CT::Idempotent};
  auto ext = externals_of(state);

  Outcome o;
  o.state = state;
  auto all = asserted | flags_of(ext);
  auto v = lookup(cat, encode(all), compoundness_of(desc));
  ++o.work.lookups;
  auto old_sys = state.all() & kSystemFlags;
  auto changed_flag = (sys - old_sys) | (old_sys - sys);
  auto c = changed_flag.empty() ? CT::SelfMap : changed_flag.members().front();
  if (auto st = status_of(v)) {
    ToggleResult r;
    o = reject(std::move(o), *st, c, desc, v.note);
    r.status = o.status;
    r.message = o.message;
    r.note = o.note;
    r.outcomes.push_back(std::move(o));
    return r;
  }
  BasisPreference pref;
  pref.keep = sys;
  pref.given = flags_of(ext);
  auto cl = closure_of(all, pref);
  ++o.work.closures;
  o.state = build_state(id, cl, ext);
  o.plans.push_back(plan_between(state, o.state));
  Metacatalog work = meta;
  work.set_descriptor(desc);
  return finish(meta, work, id, std::move(o), std::nullopt, cat);
}

std::vector<Outcome> delete_mapping(Metacatalog& meta, MappingId id, const RuleCatalog& cat) {
  auto db = meta.mapping(id).database;
  Metacatalog work = meta;
  erase_mapping(work, id);
  auto out = reconcile_database(work, db, cat);
  if (!out.empty() && !out.front().accepted()) throw CoherenceError(out.front().message);
  meta = std::move(work);
  return out;
}

json plan_to_json(const EnforcementPlan& p) {
  json deltas = json::array();
  for (const auto& d : p.deltas)
    deltas.push_back({{"type", std::string(abbreviation(d.type))}, {"action", std::string(to_string(d.action))}});
  return {{"mapping", to_int(p.mapping)}, {"deltas", std::move(deltas)}, {"annotations", p.annotations}};
}

json outcome_to_json(const Outcome& o) {
  json plans = json::array();
  for (const auto& p : o.plans) plans.push_back(plan_to_json(p));
  json j = {{"status", std::string(to_string(o.status))},
            {"message", o.message},
            {"state", state_to_json(o.state)},
            {"plans", std::move(plans)},
            {"unchecked", o.unchecked}};
  j["note"] = o.note ? json(*o.note) : json(nullptr);
  return j;
}

}  // namespace smce
