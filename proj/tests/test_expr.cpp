#include <doctest.h>

#include <cmath>
#include <set>

#include "benchgen/expr.hpp"
#include "benchgen/rng.hpp"

using namespace benchgen;

namespace {
const Domain kDomain{-5.0, 5.0, 2};
}

TEST_CASE("evaluation of hand-built trees") {
    const double pt12[] = {1.0, 2.0};
    CHECK(parse("(add x0 x1)").evaluate(pt12) == doctest::Approx(3.0));

    CHECK(parse("(sqrt (neg 4))").evaluate({}) == doctest::Approx(2.0));

    const double pt0[] = {0.0};
    CHECK(parse("(mul (sin x0) (cos x0))").evaluate(pt0) == doctest::Approx(0.0));
}

TEST_CASE("parse/print round trip on fixed strings") {
    const char* cases[] = {
        "(add x0 (mul 3 x1))", "x0", "-10", "10", "(neg (sqrt (sin (cos x1))))",
        "(sub (add 1 2) (mul x0 x0))",
    };
    for (const char* text : cases) {
        const ExprTree t = parse(text);
        CHECK(t.str() == text);
        CHECK(parse(t.str()) == t);
    }
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_WITH_AS(parse("(div x0 x1)"), doctest::Contains("unknown operator"), ParseError);
    CHECK_THROWS_WITH_AS(parse("(add x0 11)"), doctest::Contains("constant out of range"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse("(add x0 -11)"), doctest::Contains("constant out of range"),
                         ParseError);
    CHECK_THROWS_AS(parse("(add x0)"), ParseError);
    CHECK_THROWS_AS(parse("(add x0 x1 x2)"), ParseError);
    CHECK_THROWS_AS(parse("(add x0 x1"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("(add x0 x1) junk"), ParseError);
    CHECK_THROWS_AS(parse("foo"), ParseError);

    try {
        parse("(add x0 (div 1 2))");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 9);
    }
}

TEST_CASE("random trees honor the height range") {
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        const ExprTree t = random_tree(rng, kDomain, 3, 6);
        CHECK(t.height() >= 3);
        CHECK(t.height() <= 6);
        CHECK(t.max_variable() < kDomain.dimension);
    }
    const ExprTree leaf = random_tree(rng, kDomain, 1, 1);
    CHECK(leaf.height() == 1);
}

TEST_CASE("random tree sequences are reproducible") {
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i)
        CHECK(random_tree(a, kDomain, 3, 6) == random_tree(b, kDomain, 3, 6));
}

TEST_CASE("round trip holds for 1000 random trees") {
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
        const ExprTree t = random_tree(rng, kDomain, 1, 8);
        CHECK(parse(t.str()) == t);
    }
}

TEST_CASE("evaluation is total on finite inputs") {
    Rng rng(4242);
    for (int i = 0; i < 1000; ++i) {
        const ExprTree t = random_tree(rng, kDomain, 2, 8);
        const double x[] = {rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const double y = t.evaluate(x);  // must not throw; may be non-finite on overflow
        (void)y;
    }
}

TEST_CASE("compiled evaluation matches the interpreter") {
    Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        const ExprTree t = random_tree(rng, kDomain, 1, 8);
        const CompiledExpr compiled(t);
        for (int k = 0; k < 10; ++k) {
            const double x[] = {rng.uniform(-5, 5), rng.uniform(-5, 5)};
            const double a = t.evaluate(x);
            const double b = compiled(x);
            if (std::isfinite(a))
                CHECK(a == doctest::Approx(b).epsilon(1e-12));
            else
                CHECK(!std::isfinite(b));
        }
    }
}

TEST_CASE("continuity spot check away from sqrt kinks") {
    Rng rng(55);
    const double delta = 1e-8;
    int checked = 0;
    for (int i = 0; i < 400 && checked < 100; ++i) {
        const ExprTree t = random_tree(rng, kDomain, 2, 6);
        const double x[] = {rng.uniform(-4, 4), rng.uniform(-4, 4)};
        const double f0 = t.evaluate(x);
        if (!std::isfinite(f0) || std::fabs(f0) > 1e6) continue;

        // skip points where a sqrt argument sits near zero; |.| is not
        // differentiable there
        bool near_kink = false;
        std::function<double(const ExprTree::Node&)> walk =
            [&](const ExprTree::Node& n) -> double {
            double vals[2] = {0, 0};
            for (std::size_t c = 0; c < n.children.size(); ++c) vals[c] = walk(n.children[c]);
            switch (n.kind) {
                case ExprTree::Node::Kind::constant: return n.value;
                case ExprTree::Node::Kind::variable: return x[n.value];
                case ExprTree::Node::Kind::op: break;
            }
            switch (n.op) {
                case Op::add: return vals[0] + vals[1];
                case Op::sub: return vals[0] - vals[1];
                case Op::mul: return vals[0] * vals[1];
                case Op::neg: return -vals[0];
                case Op::sqrt:
                    if (std::fabs(vals[0]) < 1e-6) near_kink = true;
                    return std::sqrt(std::fabs(vals[0]));
                case Op::sin: return std::sin(vals[0]);
                case Op::cos: return std::cos(vals[0]);
            }
            return 0;
        };
        walk(t.root());
        if (near_kink) continue;

        const double xp[] = {x[0] + delta, x[1]};
        const double f1 = t.evaluate(xp);
        if (!std::isfinite(f1)) continue;
        CHECK(std::fabs(f1 - f0) < 1e-3 * (1.0 + std::fabs(f0)));
        ++checked;
    }
    CHECK(checked >= 50);
}

TEST_CASE("crossover of two terminals swaps them") {
    Rng rng(1);
    const ExprTree a = parse("x0");
    const ExprTree b = parse("7");
    auto [c1, c2] = subtree_crossover(rng, a, b);
    CHECK(c1 == b);
    CHECK(c2 == a);
}

TEST_CASE("crossover keeps parents when offspring exceed the height cap") {
    // two height-10 chains; any interior swap at different depths busts the cap
    auto chain = [](int height, const char* leaf) {
        std::string s;
        for (int i = 0; i < height - 1; ++i) s += "(neg ";
        s += leaf;
        s.append(static_cast<std::size_t>(height - 1), ')');
        return parse(s);
    };
    const ExprTree a = chain(10, "x0");
    const ExprTree b = chain(10, "x1");
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        auto [c1, c2] = subtree_crossover(rng, a, b);
        CHECK(c1.height() <= kMaxTreeHeight);
        CHECK(c2.height() <= kMaxTreeHeight);
    }
}

TEST_CASE("crossover and mutation are deterministic per seed") {
    Rng ra(10), rb(10);
    const ExprTree p1 = parse("(add (mul x0 x0) (sin x1))");
    const ExprTree p2 = parse("(sub 3 (cos x0))");
    for (int i = 0; i < 100; ++i) {
        auto [a1, a2] = subtree_crossover(ra, p1, p2);
        auto [b1, b2] = subtree_crossover(rb, p1, p2);
        CHECK(a1 == b1);
        CHECK(a2 == b2);
        CHECK(subtree_mutation(ra, kDomain, p1) == subtree_mutation(rb, kDomain, p1));
    }
}

TEST_CASE("mutating a terminal replaces the root") {
    Rng rng(17);
    const ExprTree t = parse("5");
    bool changed = false;
    for (int i = 0; i < 50 && !changed; ++i) {
        const ExprTree m = subtree_mutation(rng, kDomain, t);
        CHECK(m.height() <= 4);
        if (!(m == t)) changed = true;
    }
    CHECK(changed);
}

TEST_CASE("height stays capped through 10000 variation operations") {
    Rng rng(2024);
    std::vector<ExprTree> pool;
    for (int i = 0; i < 20; ++i) pool.push_back(random_tree(rng, kDomain, 3, 6));
    for (int i = 0; i < 5000; ++i) {
        const std::size_t a = rng.uniform_index(pool.size());
        const std::size_t b = rng.uniform_index(pool.size());
        auto [c1, c2] = subtree_crossover(rng, pool[a], pool[b]);
        CHECK(c1.height() <= kMaxTreeHeight);
        CHECK(c2.height() <= kMaxTreeHeight);
        pool[a] = std::move(c1);
        pool[b] = std::move(c2);

        const std::size_t m = rng.uniform_index(pool.size());
        pool[m] = subtree_mutation(rng, kDomain, pool[m]);
        CHECK(pool[m].height() <= kMaxTreeHeight);
    }
}

TEST_CASE("tree builders validate their inputs") {
    CHECK_THROWS_AS(ExprTree::constant(11), std::invalid_argument);
    CHECK_THROWS_AS(ExprTree::variable(-1), std::invalid_argument);
    std::vector<ExprTree> one;
    one.push_back(ExprTree::variable(0));
    CHECK_THROWS_AS(ExprTree::apply(Op::add, std::move(one)), std::invalid_argument);
}
