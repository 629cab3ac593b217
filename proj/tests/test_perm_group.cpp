#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arboru/perm.hpp"
#include "arboru/perm_group.hpp"
#include "oracle.hpp"

using namespace arboru;

namespace {

PermGroup d5() {
    return group_from_generators(5, {parse_perm(5, "(2 5)(3 4)"), parse_perm(5, "(1 2 3 4 5)")});
}

Perm random_perm(int d, std::mt19937_64& rng) {
    std::vector<int> im(d);
    std::iota(im.begin(), im.end(), 1);
    std::shuffle(im.begin(), im.end(), rng);
    return Perm(d, im);
}

} // namespace

TEST_CASE("perm basics") {
    Perm id = Perm::identity(5);
    CHECK(id.is_identity());
    CHECK(id.cycle_string() == "()");

    Perm t = Perm::transposition(5, 2, 5);
    CHECK(t.apply(2) == 5);
    CHECK(t.apply(5) == 2);
    CHECK(t.apply(1) == 1);
    CHECK(t * t == id);

    Perm c = parse_perm(5, "(1 2 3 4 5)");
    CHECK(c.apply(5) == 1);
    CHECK((c * c.inverse()).is_identity());
    CHECK(c.inverse().cycle_string() == "(1 5 4 3 2)");

    // (a*b)(x) = a(b(x))
    Perm a = parse_perm(4, "(1 2)");
    Perm b = parse_perm(4, "(2 3)");
    CHECK((a * b).apply(3) == 1);
    CHECK((b * a).apply(3) == 2);
}

TEST_CASE("perm parse and print round-trip") {
    std::mt19937_64 rng(20240901);
    for (int d = 2; d <= 9; ++d) {
        for (int k = 0; k < 50; ++k) {
            Perm p = random_perm(d, rng);
            CHECK(parse_perm(d, p.cycle_string()) == p);
        }
    }
    CHECK(parse_perm(3, "id").is_identity());
    CHECK(parse_perm(3, "()").is_identity());
    CHECK(parse_perm(6, "(2 5)(3 4)") == parse_perm(6, "(3,4)(2,5)"));
}

TEST_CASE("perm parse rejects malformed input") {
    CHECK_THROWS_AS(parse_perm(3, "(1 4)"), parse_error);
    CHECK_THROWS_AS(parse_perm(3, "(1)"), parse_error);
    CHECK_THROWS_AS(parse_perm(4, "(1 2)(2 3)"), parse_error);
    CHECK_THROWS_AS(parse_perm(4, "(1 2"), parse_error);
    CHECK_THROWS_AS(parse_perm(4, "1 2"), parse_error);
    CHECK_THROWS_AS(parse_perm(4, ""), parse_error);
    try {
        parse_perm(3, "(1 5)", 7);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 7);
        CHECK(e.col() >= 4);
    }
}

TEST_CASE("closure enumeration matches saturation oracle") {
    auto agree = [](int d, const std::vector<Perm>& gens) {
        PermGroup G = group_from_generators(d, gens);
        auto ref = oracle::naive_closure(d, gens);
        REQUIRE(G.order() == ref.size());
        CHECK(G.elements() == ref);   // both sorted lexicographically
    };
    agree(3, {parse_perm(3, "(1 2)"), parse_perm(3, "(1 2 3)")});
    agree(5, {parse_perm(5, "(2 5)(3 4)"), parse_perm(5, "(1 2 3 4 5)")});
    agree(4, {parse_perm(4, "(1 2 3 4)")});
    agree(6, {parse_perm(6, "(1 2 3 4 5 6)"), parse_perm(6, "(1 2)")});
    agree(5, {});
}

TEST_CASE("group orders for the standard examples") {
    CHECK(PermGroup::symmetric(3).order() == 6);
    CHECK(d5().order() == 10);
    CHECK(PermGroup::cyclic(4).order() == 4);
    CHECK(PermGroup::symmetric(5).order() == 120);
    CHECK(PermGroup::alternating(5).order() == 60);
    CHECK(PermGroup::alternating(4).order() == 12);
    CHECK(PermGroup::dihedral(5).elements() == d5().elements());
}

TEST_CASE("orbit partitions") {
    auto whole = orbits(PermGroup::symmetric(3), {1, 2, 3});
    REQUIRE(whole.size() == 1);
    CHECK(whole[0] == std::vector<int>{1, 2, 3});

    auto stab = point_stabilizer(d5(), 1);
    auto cells = orbits(stab, {2, 3, 4, 5});
    REQUIRE(cells.size() == 2);
    CHECK(cells[0] == std::vector<int>{2, 5});
    CHECK(cells[1] == std::vector<int>{3, 4});

    auto c4 = orbits(PermGroup::cyclic(4), {1, 2, 3, 4});
    REQUIRE(c4.size() == 1);

    CHECK(orbits(d5(), {}).empty());
}

TEST_CASE("point stabilizers") {
    PermGroup s = point_stabilizer(PermGroup::symmetric(3), 1);
    CHECK(s.order() == 2);

    PermGroup sd5 = point_stabilizer(d5(), 1);
    REQUIRE(sd5.order() == 2);
    CHECK(sd5.contains(Perm::identity(5)));
    CHECK(sd5.contains(parse_perm(5, "(2 5)(3 4)")));

    CHECK(point_stabilizer(PermGroup::cyclic(5), 1).order() == 1);
    CHECK_THROWS_AS(point_stabilizer(d5(), 6), std::invalid_argument);
}

TEST_CASE("predicates on the suite groups") {
    PermGroup D5 = d5();
    CHECK(is_transitive(D5));
    CHECK_FALSE(is_2transitive(D5));
    CHECK(is_primitive(D5));
    CHECK(is_generated_by_point_stabilizers(D5));
    CHECK_FALSE(is_cyclic_of_prime_order(D5));

    PermGroup C5 = PermGroup::cyclic(5);
    CHECK(is_primitive(C5));
    CHECK(is_cyclic_of_prime_order(C5));
    CHECK_FALSE(is_generated_by_point_stabilizers(C5));

    PermGroup C4 = PermGroup::cyclic(4);
    CHECK_FALSE(is_primitive(C4));

    CHECK(is_2transitive(PermGroup::symmetric(3)));
    CHECK(is_2transitive(PermGroup::symmetric(5)));
    CHECK(is_2transitive(PermGroup::alternating(5)));
}

TEST_CASE("C4 block system is {1,3},{2,4}") {
    auto systems = oracle::brute_force_block_systems(PermGroup::cyclic(4));
    REQUIRE(systems.size() == 1);
    std::vector<std::vector<int>> expect{{1, 3}, {2, 4}};
    CHECK(systems[0] == expect);
}

TEST_CASE("primitivity agrees with brute-force block enumeration") {
    std::vector<PermGroup> gs;
    gs.push_back(PermGroup::symmetric(3));
    gs.push_back(PermGroup::symmetric(4));
    gs.push_back(d5());
    gs.push_back(PermGroup::cyclic(4));
    gs.push_back(PermGroup::cyclic(5));
    gs.push_back(PermGroup::cyclic(6));
    gs.push_back(PermGroup::dihedral(4));
    gs.push_back(PermGroup::dihedral(6));
    gs.push_back(PermGroup::alternating(4));
    gs.push_back(PermGroup::alternating(5));
    gs.push_back(group_from_generators(8, {parse_perm(8, "(1 2 3 4 5 6 7 8)")}));
    for (const auto& G : gs) {
        bool brute = is_transitive(G) && oracle::brute_force_block_systems(G).empty();
        CHECK(is_primitive(G) == brute);
    }
}

TEST_CASE("2-transitivity agrees with all-pairs definition") {
    std::vector<PermGroup> gs;
    gs.push_back(PermGroup::symmetric(3));
    gs.push_back(PermGroup::symmetric(6));
    gs.push_back(PermGroup::alternating(5));
    gs.push_back(PermGroup::alternating(6));
    gs.push_back(d5());
    gs.push_back(PermGroup::cyclic(4));
    gs.push_back(PermGroup::cyclic(5));
    gs.push_back(PermGroup::dihedral(6));
    for (const auto& G : gs)
        CHECK(is_2transitive(G) == oracle::naive_is_2transitive(G));
}

TEST_CASE("orbit-stabilizer product") {
    std::vector<PermGroup> gs;
    gs.push_back(PermGroup::symmetric(4));
    gs.push_back(d5());
    gs.push_back(PermGroup::cyclic(6));
    gs.push_back(PermGroup::alternating(4));
    gs.push_back(PermGroup::dihedral(6));
    for (const auto& G : gs) {
        std::vector<int> all(G.degree());
        std::iota(all.begin(), all.end(), 1);
        for (int c = 1; c <= G.degree(); ++c) {
            std::size_t orb = 0;
            for (const auto& cell : orbits(G, all))
                if (std::find(cell.begin(), cell.end(), c) != cell.end())
                    orb = cell.size();
            CHECK(point_stabilizer(G, c).order() * orb == G.order());
        }
    }
}

TEST_CASE("2-transitive implies primitive implies transitive") {
    std::vector<PermGroup> gs;
    gs.push_back(PermGroup::symmetric(3));
    gs.push_back(PermGroup::symmetric(5));
    gs.push_back(PermGroup::alternating(5));
    gs.push_back(d5());
    gs.push_back(PermGroup::cyclic(4));
    gs.push_back(PermGroup::cyclic(5));
    gs.push_back(PermGroup::dihedral(6));
    gs.push_back(point_stabilizer(PermGroup::symmetric(4), 2));
    for (const auto& G : gs) {
        if (is_2transitive(G)) CHECK(is_primitive(G));
        if (is_primitive(G)) CHECK(is_transitive(G));
    }
}

TEST_CASE("transporter witnesses") {
    auto s3 = transporter_exists(PermGroup::symmetric(3), {1, 2}, {1, 3});
    REQUIRE(s3.has_value());
    CHECK(s3->cycle_string() == "(2 3)");

    CHECK_FALSE(transporter_exists(d5(), {1, 2}, {1, 3}).has_value());

    auto w = transporter_exists(d5(), {1, 2}, {1, 5});
    REQUIRE(w.has_value());
    CHECK(w->cycle_string() == "(2 5)(3 4)");

    // Determinism: first witness in lexicographic image order.
    auto again = transporter_exists(d5(), {1, 2}, {1, 5});
    CHECK(*w == *again);
    CHECK_THROWS_AS(transporter_exists(d5(), {1, 1}, {2, 3}), std::invalid_argument);
}

TEST_CASE("group input validation") {
    CHECK_THROWS_AS(group_from_generators(3, {parse_perm(4, "(1 2)")}), std::invalid_argument);
    CHECK_THROWS_AS(group_from_generators(1, {}), std::invalid_argument);
    CHECK_THROWS_AS(Perm(3, {1, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Perm(3, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(PermGroup::from_elements(3, {parse_perm(3, "(1 2 3)")}),
                    std::invalid_argument);
}
