#include "ellhecke/root_datum.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace ellhecke;

namespace {

IMat mat(std::initializer_list<std::initializer_list<int>> rows) {
  IMat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (int v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

const std::map<std::string, std::size_t> weyl_order{{"A1", 2}, {"A1xA1", 4}, {"A2", 6}, {"A3", 24}, {"B2", 8},
                                                     {"C2", 8}, {"B3", 48}, {"C3", 48}, {"G2", 12}};

}  // namespace

TEST(RootDatum, A1) {
  const auto rd = build_root_datum("A1");
  EXPECT_EQ(rd.rank(), 1);
  EXPECT_EQ(rd.cartan(), mat({{2}}));
  EXPECT_EQ(pairing(rd.simple_root(0), rd.simple_coroot(0)), 2);
}

TEST(RootDatum, StandardCartanMatrices) {
  EXPECT_EQ(build_root_datum("A2").cartan(), mat({{2, -1}, {-1, 2}}));
  const auto g2 = build_root_datum("G2").cartan();
  EXPECT_EQ(g2(0, 1) * g2(1, 0), 3);
  EXPECT_EQ(build_root_datum("B2").cartan(), build_root_datum("C2").cartan().transpose());
}

TEST(RootDatum, PairingMatchesCartanForBothIsogenies) {
  for (const auto& t : supported_types())
    for (auto iso : {Isogeny::adjoint, Isogeny::simply_connected}) {
      const auto rd = build_root_datum(t, iso);
      for (int i = 0; i < rd.rank(); ++i)
        for (int j = 0; j < rd.rank(); ++j)
          EXPECT_EQ(pairing(rd.simple_root(j), rd.simple_coroot(i)), rd.cartan()(i, j)) << t;
    }
}

TEST(RootDatum, UnknownLabel) {
  EXPECT_THROW(build_root_datum("E8"), std::invalid_argument);
  EXPECT_THROW(parse_isogeny("neither"), std::invalid_argument);
}

TEST(RootDatum, LanglandsDual) {
  const auto a2 = build_root_datum("A2");
  EXPECT_EQ(langlands_dual(a2).cartan(), a2.cartan());
  const auto b2 = build_root_datum("B2");
  const auto d = langlands_dual(b2);
  EXPECT_EQ(d.label(), "C2");
  EXPECT_EQ(d.cartan(), b2.cartan().transpose());
  EXPECT_EQ(d.simple_roots(), b2.simple_coroots());
  EXPECT_EQ(d.simple_coroots(), b2.simple_roots());
  const auto g2 = build_root_datum("G2", Isogeny::simply_connected);
  EXPECT_EQ(langlands_dual(langlands_dual(g2)), g2);
}

TEST(RootDatum, BraidOrder) {
  EXPECT_EQ(braid_order(build_root_datum("A1xA1"), 0, 1), 2);
  EXPECT_EQ(braid_order(build_root_datum("A2"), 0, 1), 3);
  EXPECT_EQ(braid_order(build_root_datum("B2"), 0, 1), 4);
  EXPECT_EQ(braid_order(build_root_datum("G2"), 0, 1), 6);
  EXPECT_THROW(braid_order(build_root_datum("A2"), 1, 1), std::invalid_argument);
}

TEST(WeylGroup, Orders) {
  for (const auto& [t, n] : weyl_order) EXPECT_EQ(WeylGroup(build_root_datum(t)).order(), n) << t;
  EXPECT_EQ(WeylGroup(build_root_datum("A2")).element(WeylGroup(build_root_datum("A2")).longest()).length(), 3);
  const WeylGroup g2(build_root_datum("G2"));
  EXPECT_EQ(g2.element(g2.longest()).length(), 6);
}

// Independent oracle: close the generator matrices under multiplication and
// record the BFS distance from the identity.
TEST(WeylGroup, MatchesBruteForceClosure) {
  for (const auto& t : {"A2", "B2", "G2", "A3"}) {
    const auto rd = build_root_datum(t);
    const WeylGroup g(rd);
    std::map<std::vector<int>, int> dist;
    auto key = [](const IMat& m) { return std::vector<int>(m.data(), m.data() + m.size()); };
    std::vector<IMat> frontier{IMat::Identity(rd.rank(), rd.rank())};
    dist[key(frontier[0])] = 0;
    for (int d = 1; !frontier.empty(); ++d) {
      std::vector<IMat> next;
      for (const auto& m : frontier)
        for (int i = 0; i < rd.rank(); ++i) {
          IMat p = m * rd.reflection_on_costar(i);
          if (dist.emplace(key(p), d).second) next.push_back(p);
        }
      frontier = std::move(next);
    }
    ASSERT_EQ(dist.size(), g.order()) << t;
    for (const auto& e : g.elements()) EXPECT_EQ(dist.at(key(e.mat_on_costar)), e.length()) << t;
  }
}

TEST(WeylGroup, ReducedWordsReproduceMatrices) {
  for (const auto& t : supported_types()) {
    const auto rd = build_root_datum(t);
    const WeylGroup g(rd);
    for (const auto& e : g.elements()) {
      IMat m = IMat::Identity(rd.rank(), rd.rank());
      IMat ms = m;
      for (int i : e.word) {
        m = m * rd.reflection_on_costar(i);
        ms = ms * rd.reflection_on_star(i);
      }
      EXPECT_EQ(m, e.mat_on_costar) << t;
      EXPECT_EQ(ms, e.mat_on_star) << t;
    }
  }
}

TEST(WeylGroup, LengthChangesByOne) {
  for (const auto& t : supported_types()) {
    const WeylGroup g(build_root_datum(t));
    for (std::size_t w = 0; w < g.order(); ++w)
      for (int i = 0; i < g.rank(); ++i) {
        const int d = g.element(g.multiply(w, g.simple_reflection(i))).length() - g.element(w).length();
        EXPECT_TRUE(d == 1 || d == -1) << t;
      }
  }
}

TEST(WeylGroup, PairingIsInvariant) {
  for (const auto& t : {"B2", "G2", "C3"}) {
    const WeylGroup g(build_root_datum(t, Isogeny::simply_connected));
    const int n = g.rank();
    IVec a(n), b(n);
    for (int k = 0; k < n; ++k) a(k) = 3 * k - 2, b(k) = 5 - 2 * k;
    for (const auto& e : g.elements()) EXPECT_EQ(pairing(e.mat_on_star * a, e.mat_on_costar * b), pairing(a, b));
  }
}

TEST(WeylGroup, InversionSets) {
  const WeylGroup g(build_root_datum("A2"));
  EXPECT_TRUE(g.inversion_set(WeylGroup::identity()).empty());
  for (int i = 0; i < 2; ++i) {
    const auto inv = g.inversion_set(g.simple_reflection(i));
    ASSERT_EQ(inv.size(), 1u);
    EXPECT_EQ(g.positive_roots()[inv[0]].root, g.datum().simple_root(i));
  }
  EXPECT_EQ(g.inversion_set(g.longest()).size(), 3u);
  for (const auto& t : supported_types()) {
    const WeylGroup h(build_root_datum(t));
    for (std::size_t w = 0; w < h.order(); ++w)
      EXPECT_EQ(static_cast<int>(h.inversion_set(w).size()), h.element(w).length()) << t;
  }
}

TEST(WeylGroup, RhoPairsToOneWithSimpleCoroots) {
  for (const auto& t : {"A1", "A2", "B2", "G2", "C3"}) {
    const WeylGroup g(build_root_datum(t));
    const auto rho = g.rho_vectors();
    for (int i = 0; i < g.rank(); ++i) {
      EXPECT_EQ(pairing(rho.two_rho, g.datum().simple_coroot(i)), 2) << t;
      EXPECT_EQ(pairing(g.datum().simple_root(i), rho.two_rho_vee), 2) << t;
    }
  }
  // B2: explicit half-sum over the four positive coroots.
  const WeylGroup b2(build_root_datum("B2"));
  ASSERT_EQ(b2.positive_roots().size(), 4u);
  IVec s = IVec::Zero(2);
  for (const auto& r : b2.positive_roots()) s += r.coroot;
  EXPECT_EQ(s, b2.rho_vectors().two_rho_vee);
}

TEST(WeylGroup, MultiplyInverseFromWord) {
  const WeylGroup g(build_root_datum("G2"));
  for (std::size_t w = 0; w < g.order(); ++w) {
    EXPECT_EQ(g.multiply(w, g.inverse(w)), WeylGroup::identity());
    EXPECT_EQ(g.from_word(g.element(w).word), w);
    EXPECT_EQ(g.from_word(g.reduced_word(w, true)), w);
    EXPECT_EQ(static_cast<int>(g.reduced_word(w, true).size()), g.element(w).length());
  }
  EXPECT_THROW(g.from_word({0, 5}), std::invalid_argument);
}
