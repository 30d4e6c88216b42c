#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "fixtures.hpp"

using namespace soq;

TEST_CASE("construction validates shape") {
    CHECK_THROWS_AS(RootedTree({0, 1}), domain_error);                       // no root
    CHECK_THROWS_AS(RootedTree({-1, -1}), domain_error);                     // two roots
    CHECK_THROWS_AS(RootedTree({-1, 2, 1}), domain_error);                   // cycle off the root
    CHECK_THROWS_AS(RootedTree(std::vector<int>{}), domain_error);           // empty
    CHECK_NOTHROW(RootedTree({1, -1}));                                      // child id below parent
}

TEST_CASE("coheights and layers") {
    auto t = fixtures::walkthrough_tree();
    REQUIRE(t.vertex_count() == 11);
    CHECK(t.coheight(t.root()) == 0);
    CHECK(t.layer_count() == 3);
    CHECK(layer(t, 0) == std::vector<int>{t.root()});
    CHECK(layer(t, 1).size() == 4);
    CHECK(layer(t, 2).size() == 6);
    CHECK(layer(t, 3).empty());

    auto path = parse_tree("(((())))");
    CHECK(path.coheight(3) == 3);

    auto single = parse_tree("()");
    CHECK(layer(single, 1).empty());
}

TEST_CASE("subtrees") {
    auto t = fixtures::walkthrough_tree();
    CHECK(subtree_vertices(t, t.root()).size() == 11);
    for (int v : layer(t, 2))
        CHECK(subtree_vertices(t, v) == std::vector<int>{v});
    // the first child of the root has one child: subtree of size 2
    int first_child = t.children(t.root()).front();
    CHECK(subtree_vertices(t, first_child).size() == 2);
    CHECK(coheight_profile(t, first_child) == parse_monomial("x1 x2"));
}

TEST_CASE("coheight profiles") {
    auto t = fixtures::four_layer_tree();
    CHECK(coheight_profile(t) == parse_monomial("x0 x1^4 x2^6 x3^8"));
    for (int v : layer(t, 3))
        CHECK(coheight_profile(t, v) == parse_monomial("x3"));
    // gap-set profiles quoted in the worked product
    auto s = fixtures::four_layer_gap_set(t);
    std::multiset<std::string> profiles;
    for (const auto& [v, c] : s.counts)
        profiles.insert(to_string(coheight_profile(t, v)));
    CHECK(profiles == std::multiset<std::string>{"x1 x2 x3", "x2", "x2 x3"});
}

TEST_CASE("layer sizes match the coheight profile") {
    for (int d = 1; d <= 7; ++d)
        for (const auto& t : enumerate_rooted_trees(d)) {
            auto xh = coheight_profile(t);
            int total = 0;
            for (int n = 0; n < t.layer_count(); ++n) {
                CHECK(xh.exponent(n) == static_cast<long long>(layer(t, n).size()));
                total += static_cast<int>(layer(t, n).size());
            }
            CHECK(total == d);
            CHECK(layer(t, 0).size() == 1);
        }
}

TEST_CASE("nested profiles") {
    auto t = fixtures::four_layer_tree();
    auto level1 = nested_profile(t, 1);
    CHECK(level1.base() == parse_monomial("x0 x1^4 x2^6 x3^8"));

    auto level2 = nested_profile(t, 2);
    REQUIRE(level2.elements().size() == 19);
    std::multiset<std::string> shown;
    for (const auto& e : level2.elements())
        shown.insert(to_string(e.base()));
    CHECK(shown.count("x0 x1^4 x2^6 x3^8") == 1);
    CHECK(shown.count("x1 x2 x3") == 1);
    CHECK(shown.count("x1 x2 x3^2") == 1);
    CHECK(shown.count("x1 x2^2 x3^2") == 1);
    CHECK(shown.count("x1 x2^2 x3^3") == 1);
    CHECK(shown.count("x2") == 1);
    CHECK(shown.count("x2 x3") == 2);

    auto single = parse_tree("()");
    for (int level = 1; level <= 4; ++level) {
        auto p = nested_profile(single, level);
        while (p.level() > 1) {
            REQUIRE(p.elements().size() == 1);
            p = p.elements().front();
        }
        CHECK(p.base() == parse_monomial("x0"));
    }
}

TEST_CASE("nested comparison and canonical form") {
    auto trees3 = enumerate_rooted_trees(3);
    REQUIRE(trees3.size() == 2);
    CHECK(nested_compare(nested_profile(trees3[0], 2), nested_profile(trees3[1], 2)) !=
          std::strong_ordering::equal);
    CHECK(nested_compare(nested_profile(trees3[0], 2), nested_profile(trees3[0], 2)) ==
          std::strong_ordering::equal);
    CHECK_THROWS_AS(nested_compare(nested_profile(trees3[0], 1), nested_profile(trees3[0], 2)),
                    domain_error);
}

TEST_CASE("nested profiles are isomorphism-invariant and eventually complete") {
    // children permutation does not change the profile
    auto a = parse_tree("(( () )( ()() ))");
    auto b = parse_tree("(( ()() )( () ))");
    REQUIRE(is_isomorphic(a, b));
    for (int level = 1; level <= 3; ++level)
        CHECK(nested_profile(a, level) == nested_profile(b, level));

    // at level >= layer count the profile separates isomorphism classes
    for (int d = 1; d <= 7; ++d) {
        auto trees = enumerate_rooted_trees(d);
        std::set<std::string> codes, keys;
        for (const auto& t : trees) {
            codes.insert(canonical_code(t));
            keys.insert(to_string(nested_profile(t, t.layer_count())));
        }
        CHECK(codes.size() == trees.size());
        CHECK(keys.size() == trees.size());
    }
}

TEST_CASE("canonical codes and isomorphism") {
    auto path3 = parse_tree("((()))");
    auto star3 = parse_tree("(()())");
    CHECK_FALSE(is_isomorphic(path3, star3));

    auto trees5 = enumerate_rooted_trees(5);
    REQUIRE(trees5.size() == 9);
    std::set<std::string> codes;
    for (const auto& t : trees5)
        codes.insert(canonical_code(t));
    CHECK(codes.size() == 9);
}

TEST_CASE("enumeration counts match the counting recurrence") {
    for (int d = 1; d <= 8; ++d)
        CHECK(static_cast<long long>(enumerate_rooted_trees(d).size()) ==
              fixtures::rooted_tree_count(d));
    CHECK(fixtures::rooted_tree_count(8) == 115);
    CHECK_THROWS_AS(enumerate_rooted_trees(0), domain_error);
    CHECK_THROWS_AS(enumerate_rooted_trees(11), domain_error);
    CHECK(static_cast<long long>(enumerate_rooted_trees(12, 12).size()) ==
          fixtures::rooted_tree_count(12));
}

TEST_CASE("random trees") {
    CHECK(random_tree(1, 5).vertex_count() == 1);
    auto a = random_tree(8, 77);
    auto b = random_tree(8, 77);
    CHECK(a.parents() == b.parents());
    CHECK(a.vertex_count() == 8);
    CHECK_THROWS_AS(random_tree(0, 1), domain_error);
}

TEST_CASE("tree text round trips") {
    CHECK(to_string(parse_tree("()")) == "()");
    auto t = fixtures::walkthrough_tree();
    CHECK(is_isomorphic(parse_tree(to_string(t)), t));
    CHECK_THROWS_AS(parse_tree("(()"), domain_error);
    CHECK_THROWS_AS(parse_tree("())"), domain_error);
    CHECK_THROWS_AS(parse_tree("()()"), domain_error);
    CHECK_THROWS_AS(parse_tree("(a)"), domain_error);
    CHECK_THROWS_AS(parse_tree(""), domain_error);
}

TEST_CASE("rebasing subtree profiles") {
    auto t = fixtures::four_layer_tree();
    int c1 = t.children(t.root()).front();
    // view the first child's subtree as a standalone tree
    auto standalone = parse_tree("((()))");
    for (int level = 1; level <= 2; ++level) {
        auto value = soq::detail::nested_value_at(t, c1, level);
        CHECK(rebase(value, 1) == nested_profile(standalone, level));
    }
    CHECK(nested_min_index(soq::detail::nested_value_at(t, c1, 2)) == 1);
}
