#include <chrono>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "smce/errors.hpp"
#include "smce/rule_catalog.hpp"

using namespace smce;
using CT = ConstraintType;

namespace {

std::set<CT> flags_of(const std::vector<ImpliedFlag>& v) {
  std::set<CT> s;
  for (const auto& f : v) s.insert(f.flag);
  return s;
}

std::string export_all(const RuleCatalog& cat) {
  std::ostringstream os;
  write_corollaries_csv(os, cat);
  write_coherencies_csv(os, cat);
  write_redundancies_csv(os, cat);
  os << catalog_to_json(cat).dump();
  return os.str();
}

}  // namespace

TEST(RuleCatalog, Counts) {
  const auto& cat = default_catalog();
  EXPECT_EQ(cat.enumerated(), 131071u);
  EXPECT_EQ(cat.coherence_rows().size(), 5365u);
  std::size_t incoherent = 0;
  for (const auto& r : cat.coherence_rows()) incoherent += !r.coherent;
  EXPECT_EQ(incoherent, 3828u);
  EXPECT_EQ(cat.redundancy_rows().size(), 4285u);
  EXPECT_EQ(cat.additional_rows().size(), 1691u);
  EXPECT_EQ(cat.rejection_rows().size(), 4u);
}

TEST(RuleCatalog, GenerationIsFastAndDeterministic) {
  auto t0 = std::chrono::steady_clock::now();
  auto a = generate_catalog();
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 5.0);
  auto b = generate_catalog();
  EXPECT_EQ(export_all(a), export_all(b));
}

TEST(RuleCatalog, LedgerIdsUnique) {
  std::set<std::string> ids;
  for (const auto& c : corollary_ledger()) EXPECT_TRUE(ids.insert(c.id).second) << c.id;
  EXPECT_EQ(find_corollary("A.6.1.1 (viii)").kind, CorollaryKind::Incoherence);
  EXPECT_EQ(find_corollary("A.6.2.1 (iv)").kind, CorollaryKind::Rejection);
  EXPECT_EQ(find_corollary("A.6.1.1 (x)").kind, CorollaryKind::Redundancy);
}

TEST(RuleCatalog, Row65557Incoherent) {
  const auto* row = default_catalog().row({65557});
  ASSERT_NE(row, nullptr);
  EXPECT_FALSE(row->coherent);
  EXPECT_EQ(row->note, "A.6.1.1 (viii)");
  EXPECT_EQ(render_note("A.6.1.1 (viii)"), "A.6.1.1 (viii). non-prime ^ total ^ onto ^ self-map");
}

TEST(RuleCatalog, CoherentRows) {
  for (std::uint32_t x : {65552u, 65556u}) {
    const auto* row = default_catalog().row({x});
    ASSERT_NE(row, nullptr) << x;
    EXPECT_TRUE(row->coherent) << x;
  }
}

TEST(RuleCatalog, Redundancies65545) {
  auto v = lookup(default_catalog(), {65545});
  EXPECT_EQ(v.kind, VerdictKind::Coherent);
  EXPECT_EQ(flags_of(v.redundant), (std::set<CT>{CT::Onto, CT::Bijective}));
  for (const auto& r : v.redundant) EXPECT_EQ(r.note, "A.6.1.4 (i)");
  EXPECT_EQ(flags_of(v.additional), (std::set<CT>{CT::Onto, CT::Bijective}));
}

TEST(RuleCatalog, LookupTrivial) {
  auto v = lookup(default_catalog(), encode({CT::Total, CT::DefaultValue}));
  EXPECT_EQ(v.kind, VerdictKind::TriviallyIncoherent);
  EXPECT_EQ(v.note, "A.6.1.1 (i)");
}

TEST(RuleCatalog, LookupRejected) {
  const auto& cat = default_catalog();
  auto v = lookup(cat, encode({CT::SelfMap, CT::Total, CT::Symmetric, CT::Idempotent}));
  EXPECT_EQ(v.kind, VerdictKind::Rejected);
  EXPECT_EQ(v.note, "A.6.2.1 (iv)");
  auto refl = encode({CT::SelfMap, CT::Total, CT::Reflexive});
  EXPECT_EQ(lookup(cat, refl, Compoundness::Compound).kind, VerdictKind::Coherent);
  auto single = lookup(cat, refl, Compoundness::Single);
  EXPECT_EQ(single.kind, VerdictKind::Rejected);
  EXPECT_EQ(single.note, "A.6.2.1 (ii)");
}

TEST(RuleCatalog, SpotRedundancies) {
  const auto& cat = default_catalog();
  EXPECT_EQ(flags_of(lookup(cat, {24}).redundant), std::set<CT>{CT::Bijective});
  EXPECT_EQ(flags_of(lookup(cat, {40}).redundant), (std::set<CT>{CT::Onto, CT::OneToOne}));
}

TEST(RuleCatalog, ClosureExamples) {
  const auto& cat = default_catalog();
  EXPECT_EQ(flags_of(redundancy_closure(cat, {CT::OneToOne, CT::Onto}).redundant), std::set<CT>{CT::Bijective});
  EXPECT_EQ(flags_of(redundancy_closure(cat, {CT::SelfMap, CT::Acyclic}).redundant),
            (std::set<CT>{CT::Asymmetric, CT::Irreflexive}));
  EXPECT_TRUE(redundancy_closure(cat, {}).redundant.empty());
  auto c = redundancy_closure(cat, {CT::SelfMap, CT::Total, CT::OneToOne});
  EXPECT_EQ(flags_of(c.redundant), (std::set<CT>{CT::Onto, CT::Bijective}));
  EXPECT_EQ(c.basis, (ConstraintFlags{CT::SelfMap, CT::Total, CT::OneToOne}));
}

TEST(RuleCatalog, ClosureRejectsIncoherent) {
  EXPECT_THROW(redundancy_closure(default_catalog(), decode(CombinationCode{65557})), CoherenceError);
}

TEST(RuleCatalog, OntoReplacedByOneToOne) {
  const auto& cat = default_catalog();
  for (const auto& row : cat.coherence_rows()) {
    auto f = decode(row.x);
    if (!row.coherent || !f.contains_all({CT::SelfMap, CT::Total, CT::Onto}) || f.contains(CT::CanonicalInjection))
      continue;
    auto c = closure_of(f);
    EXPECT_TRUE(c.basis.contains(CT::OneToOne)) << row.x.value;
    EXPECT_FALSE(c.basis.intersects({CT::Onto, CT::Bijective})) << row.x.value;
  }
}

TEST(RuleCatalog, ClosureIsFixpointForAllSets) {
  for (std::uint32_t x = 0; x <= kMaxCombinationCode; ++x) {
    auto full = derive(ConstraintFlags::from_bits(x)).full;
    ASSERT_EQ(derive(full).full, full) << x;
  }
}

TEST(RuleCatalog, RedundancyRowsReferenceCoherentRows) {
  const auto& cat = default_catalog();
  for (const auto& r : cat.redundancy_rows()) {
    const auto* row = cat.row(r.x);
    ASSERT_NE(row, nullptr) << r.x.value;
    EXPECT_TRUE(row->coherent) << r.x.value;
  }
  std::set<std::pair<std::uint32_t, CT>> seen;
  for (const auto& r : cat.redundancy_rows()) EXPECT_TRUE(seen.insert({r.x.value, r.redundant}).second);
}

TEST(RuleCatalog, IncoherentRowsCarryNotes) {
  for (const auto& r : default_catalog().coherence_rows())
    if (!r.coherent) EXPECT_TRUE(r.note.has_value()) << r.x.value;
}

TEST(RuleCatalog, TrivialCombinationsAbsent) {
  const auto& cat = default_catalog();
  std::size_t stored = 0;
  for (std::uint32_t x = 1; x <= kMaxCombinationCode; ++x) {
    bool trivial = trivial_note(ConstraintFlags::from_bits(x)).has_value();
    EXPECT_EQ(cat.row({x}) == nullptr, trivial) << x;
    stored += !trivial;
  }
  EXPECT_EQ(stored, cat.coherence_rows().size());
}

TEST(RuleCatalog, CsvHeaders) {
  std::ostringstream a, b, c;
  write_corollaries_csv(a, default_catalog());
  write_coherencies_csv(b, default_catalog());
  write_redundancies_csv(c, default_catalog());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "CorId,CorType,CorDescription,CorSection");
  EXPECT_EQ(b.str().rfind("x,Ch,", 0), 0u);
  EXPECT_EQ(c.str().substr(0, c.str().find('\n')), "SMCCombination,Redundancy,Notes");
}

TEST(RuleCatalog, VerdictJson) {
  auto j = verdict_to_json(lookup(default_catalog(), {65557}));
  EXPECT_EQ(j["verdict"], "incoherent");
  EXPECT_EQ(j["note"], "A.6.1.1 (viii)");
}
