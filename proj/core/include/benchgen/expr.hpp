#ifndef BENCHGEN_EXPR_HPP
#define BENCHGEN_EXPR_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "benchgen/rng.hpp"

namespace benchgen {

/// Primitive operators of the expression grammar. The set is fixed: no
/// division and no exp/log, so every operator is total and continuous on
/// the reals (sqrt acts on the absolute value of its argument).
enum class Op : std::uint8_t { add, sub, mul, neg, sqrt, sin, cos };

int arity(Op op);
std::string_view op_name(Op op);

inline constexpr int kMaxTreeHeight = 10;   // cap enforced by variation operators
inline constexpr int kConstantMin = -10;
inline constexpr int kConstantMax = 10;

/// Box-constrained search space [lower, upper]^dimension.
struct Domain {
    double lower = -5.0;
    double upper = 5.0;
    int dimension = 2;

    double range() const { return upper - lower; }
};

/// Immutable expression tree over the primitive set. Doubles as the
/// phenotype: evaluate() interprets the tree as a function R^D -> R.
/// Terminals are variables x<i> or integer constants in [-10, 10].
class ExprTree {
public:
    struct Node {
        enum class Kind : std::uint8_t { op, variable, constant };
        Kind kind = Kind::constant;
        Op op = Op::add;
        int value = 0;  // variable index or constant
        std::vector<Node> children;
    };

    static ExprTree variable(int index);
    static ExprTree constant(int value);
    static ExprTree apply(Op op, std::vector<ExprTree> children);

    const Node& root() const { return root_; }

    /// Levels on the longest root-to-leaf path; a lone terminal has height 1.
    int height() const;
    std::size_t node_count() const;
    /// Largest variable index used, or -1 for variable-free trees.
    int max_variable() const;

    double evaluate(std::span<const double> point) const;

    /// Canonical s-expression, e.g. "(add x0 (mul 3 x1))".
    std::string str() const;

    friend bool operator==(const ExprTree& a, const ExprTree& b);

private:
    explicit ExprTree(Node root) : root_(std::move(root)) {}
    Node root_;

    friend class TreeBuilder;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Parses the canonical s-expression grammar. Throws ParseError on
/// malformed input, unknown operators, wrong arity, or constants
/// outside [-10, 10]. parse(t.str()) == t for every valid tree.
ExprTree parse(std::string_view text);

/// Ramped half-and-half initialization: target height uniform in
/// [min_height, max_height], full and grow methods alternating at random.
/// The returned height is always within the requested range.
ExprTree random_tree(Rng& rng, const Domain& domain, int min_height, int max_height);

/// Swaps uniformly chosen subtrees between copies of the parents. An
/// offspring taller than kMaxTreeHeight is dropped and the corresponding
/// parent passes through unchanged.
std::pair<ExprTree, ExprTree> subtree_crossover(Rng& rng, const ExprTree& a, const ExprTree& b);

/// Replaces a uniformly chosen subtree with a fresh grow-tree of height
/// at most 4. Falls back to the input if the cap would be exceeded.
ExprTree subtree_mutation(Rng& rng, const Domain& domain, const ExprTree& a);

/// Expression flattened to a postfix program; evaluates several times
/// faster than the recursive interpreter. Safe to call concurrently.
class CompiledExpr {
public:
    explicit CompiledExpr(const ExprTree& tree);

    double operator()(std::span<const double> point) const;
    int max_variable() const { return max_variable_; }

private:
    struct Instr {
        ExprTree::Node::Kind kind;
        Op op;
        int value;
    };
    std::vector<Instr> code_;
    int max_variable_ = -1;
    int stack_need_ = 0;
};

}  // namespace benchgen

#endif
