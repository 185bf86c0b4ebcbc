#include "benchgen/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace benchgen {

namespace {

using Node = ExprTree::Node;
using Kind = ExprTree::Node::Kind;

constexpr Op kAllOps[] = {Op::add, Op::sub, Op::mul, Op::neg, Op::sqrt, Op::sin, Op::cos};
constexpr int kNumOps = 7;

int node_height(const Node& n) {
    int h = 0;
    for (const Node& c : n.children) h = std::max(h, node_height(c));
    return h + 1;
}

std::size_t node_size(const Node& n) {
    std::size_t s = 1;
    for (const Node& c : n.children) s += node_size(c);
    return s;
}

int node_max_var(const Node& n) {
    int v = n.kind == Kind::variable ? n.value : -1;
    for (const Node& c : n.children) v = std::max(v, node_max_var(c));
    return v;
}

double eval_node(const Node& n, std::span<const double> point) {
    switch (n.kind) {
        case Kind::constant:
            return static_cast<double>(n.value);
        case Kind::variable:
            return point[static_cast<std::size_t>(n.value)];
        case Kind::op:
            break;
    }
    switch (n.op) {
        case Op::add:
            return eval_node(n.children[0], point) + eval_node(n.children[1], point);
        case Op::sub:
            return eval_node(n.children[0], point) - eval_node(n.children[1], point);
        case Op::mul:
            return eval_node(n.children[0], point) * eval_node(n.children[1], point);
        case Op::neg:
            return -eval_node(n.children[0], point);
        case Op::sqrt:
            return std::sqrt(std::fabs(eval_node(n.children[0], point)));
        case Op::sin:
            return std::sin(eval_node(n.children[0], point));
        case Op::cos:
            return std::cos(eval_node(n.children[0], point));
    }
    return 0.0;  // unreachable
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::constant:
            out += std::to_string(n.value);
            return;
        case Kind::variable:
            out += 'x';
            out += std::to_string(n.value);
            return;
        case Kind::op:
            out += '(';
            out += op_name(n.op);
            for (const Node& c : n.children) {
                out += ' ';
                print_node(c, out);
            }
            out += ')';
            return;
    }
}

bool node_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::constant:
        case Kind::variable:
            return a.value == b.value;
        case Kind::op:
            break;
    }
    if (a.op != b.op) return false;
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!node_equal(a.children[i], b.children[i])) return false;
    return true;
}

// Preorder access to the idx-th node (0 = root).
Node* nth_node(Node& n, std::size_t& idx) {
    if (idx == 0) return &n;
    --idx;
    for (Node& c : n.children) {
        Node* found = nth_node(c, idx);
        if (found) return found;
    }
    return nullptr;
}

Node make_terminal(Rng& rng, const Domain& domain) {
    Node n;
    if (domain.dimension > 0 && rng.bernoulli(0.5)) {
        n.kind = Kind::variable;
        n.value = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(domain.dimension)));
    } else {
        n.kind = Kind::constant;
        n.value = rng.uniform_int(kConstantMin, kConstantMax);
    }
    return n;
}

Node make_op_node(Rng& rng) {
    Node n;
    n.kind = Kind::op;
    n.op = kAllOps[rng.uniform_index(kNumOps)];
    return n;
}

// target is the remaining height budget counted in levels including this node.
// full: internal node at every level above the leaves.
// grow: internal nodes forced until min_height is reachable, terminals
// allowed afterwards (50/50), forced at the height cap.
Node random_node(Rng& rng, const Domain& domain, int min_height, int target, bool full) {
    const bool must_terminate = target <= 1;
    const bool may_terminate = min_height <= 1;
    bool terminal;
    if (must_terminate) {
        terminal = true;
    } else if (full) {
        terminal = false;
    } else {
        terminal = may_terminate && rng.bernoulli(0.5);
    }
    if (terminal) return make_terminal(rng, domain);

    Node n = make_op_node(rng);
    const int child_count = arity(n.op);
    n.children.reserve(static_cast<std::size_t>(child_count));
    for (int i = 0; i < child_count; ++i)
        n.children.push_back(random_node(rng, domain, min_height - 1, target - 1, full));
    return n;
}

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_spaces() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos); }

    std::string_view token() {
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (pos == start) fail("expected token");
        return text.substr(start, pos - start);
    }

    Node expr(int depth) {
        if (depth > 5000) fail("expression too deep");
        skip_spaces();
        if (pos >= text.size()) fail("unexpected end of input");
        if (text[pos] == '(') {
            ++pos;
            skip_spaces();
            std::size_t op_pos = pos;
            std::string_view name = token();
            Op op;
            if (!lookup_op(name, op)) {
                pos = op_pos;
                fail("unknown operator '" + std::string(name) + "'");
            }
            Node n;
            n.kind = Kind::op;
            n.op = op;
            const int want = arity(op);
            for (int i = 0; i < want; ++i) {
                skip_spaces();
                if (pos < text.size() && text[pos] == ')')
                    fail("operator '" + std::string(name) + "' expects " + std::to_string(want) +
                         " arguments");
                n.children.push_back(expr(depth + 1));
            }
            skip_spaces();
            if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
            ++pos;
            return n;
        }
        if (text[pos] == ')') fail("unexpected ')'");
        return terminal();
    }

    Node terminal() {
        std::size_t start = pos;
        std::string_view tok = token();
        Node n;
        if (tok.size() >= 2 && tok[0] == 'x' && std::isdigit(static_cast<unsigned char>(tok[1]))) {
            int idx = 0;
            auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), idx);
            if (ec != std::errc() || ptr != tok.data() + tok.size() || idx < 0) {
                pos = start;
                fail("bad variable '" + std::string(tok) + "'");
            }
            n.kind = Kind::variable;
            n.value = idx;
            return n;
        }
        int value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            pos = start;
            fail("unknown symbol '" + std::string(tok) + "'");
        }
        if (value < kConstantMin || value > kConstantMax) {
            pos = start;
            fail("constant out of range [-10,10]: " + std::string(tok));
        }
        n.kind = Kind::constant;
        n.value = value;
        return n;
    }

    static bool lookup_op(std::string_view name, Op& out) {
        for (Op op : kAllOps) {
            if (op_name(op) == name) {
                out = op;
                return true;
            }
        }
        return false;
    }
};

}  // namespace

int arity(Op op) {
    switch (op) {
        case Op::add:
        case Op::sub:
        case Op::mul:
            return 2;
        case Op::neg:
        case Op::sqrt:
        case Op::sin:
        case Op::cos:
            return 1;
    }
    return 0;  // unreachable
}

std::string_view op_name(Op op) {
    switch (op) {
        case Op::add: return "add";
        case Op::sub: return "sub";
        case Op::mul: return "mul";
        case Op::neg: return "neg";
        case Op::sqrt: return "sqrt";
        case Op::sin: return "sin";
        case Op::cos: return "cos";
    }
    return "";  // unreachable
}

class TreeBuilder {
public:
    static ExprTree build(Node n) { return ExprTree(std::move(n)); }
};

ExprTree ExprTree::variable(int index) {
    if (index < 0) throw std::invalid_argument("variable index must be non-negative");
    Node n;
    n.kind = Kind::variable;
    n.value = index;
    return TreeBuilder::build(std::move(n));
}

ExprTree ExprTree::constant(int value) {
    if (value < kConstantMin || value > kConstantMax)
        throw std::invalid_argument("constant out of range [-10,10]");
    Node n;
    n.kind = Kind::constant;
    n.value = value;
    return TreeBuilder::build(std::move(n));
}

ExprTree ExprTree::apply(Op op, std::vector<ExprTree> children) {
    if (static_cast<int>(children.size()) != arity(op))
        throw std::invalid_argument("wrong arity for operator " + std::string(op_name(op)));
    Node n;
    n.kind = Kind::op;
    n.op = op;
    n.children.reserve(children.size());
    for (ExprTree& c : children) n.children.push_back(std::move(c.root_));
    return TreeBuilder::build(std::move(n));
}

int ExprTree::height() const { return node_height(root_); }

std::size_t ExprTree::node_count() const { return node_size(root_); }

int ExprTree::max_variable() const { return node_max_var(root_); }

double ExprTree::evaluate(std::span<const double> point) const { return eval_node(root_, point); }

std::string ExprTree::str() const {
    std::string out;
    print_node(root_, out);
    return out;
}

bool operator==(const ExprTree& a, const ExprTree& b) { return node_equal(a.root_, b.root_); }

ExprTree parse(std::string_view text) {
    Parser p{text};
    Node root = p.expr(0);
    p.skip_spaces();
    if (p.pos != text.size()) p.fail("trailing input");
    return TreeBuilder::build(std::move(root));
}

ExprTree random_tree(Rng& rng, const Domain& domain, int min_height, int max_height) {
    if (min_height < 1 || min_height > max_height)
        throw std::invalid_argument("invalid height range");
    const int target = rng.uniform_int(min_height, max_height);
    const bool full = rng.bernoulli(0.5);
    return TreeBuilder::build(random_node(rng, domain, min_height, target, full));
}

std::pair<ExprTree, ExprTree> subtree_crossover(Rng& rng, const ExprTree& a, const ExprTree& b) {
    Node left = a.root();
    Node right = b.root();

    std::size_t ia = rng.uniform_index(node_size(left));
    std::size_t ib = rng.uniform_index(node_size(right));
    Node* na = nth_node(left, ia);
    Node* nb = nth_node(right, ib);
    std::swap(*na, *nb);

    ExprTree child1 = node_height(left) <= kMaxTreeHeight ? TreeBuilder::build(std::move(left)) : a;
    ExprTree child2 = node_height(right) <= kMaxTreeHeight ? TreeBuilder::build(std::move(right)) : b;
    return {std::move(child1), std::move(child2)};
}

ExprTree subtree_mutation(Rng& rng, const Domain& domain, const ExprTree& a) {
    Node root = a.root();
    std::size_t idx = rng.uniform_index(node_size(root));
    Node* target = nth_node(root, idx);
    *target = random_node(rng, domain, 1, 4, false);
    if (node_height(root) > kMaxTreeHeight) return a;
    return TreeBuilder::build(std::move(root));
}

CompiledExpr::CompiledExpr(const ExprTree& tree) {
    max_variable_ = tree.max_variable();
    code_.reserve(tree.node_count());
    // Postfix emission: children first, operator last.
    struct Frame {
        const Node* node;
        std::size_t next_child;
    };
    std::vector<Frame> stack;
    stack.push_back({&tree.root(), 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next_child < f.node->children.size()) {
            const Node* child = &f.node->children[f.next_child++];
            stack.push_back({child, 0});
        } else {
            code_.push_back({f.node->kind, f.node->op, f.node->value});
            stack.pop_back();
        }
    }
    int depth = 0;
    for (const Instr& in : code_) {
        if (in.kind == Kind::op)
            depth -= arity(in.op) - 1;
        else
            ++depth;
        stack_need_ = std::max(stack_need_, depth);
    }
}

double CompiledExpr::operator()(std::span<const double> point) const {
    double local[64];
    std::vector<double> heap;
    double* sp = local;
    if (stack_need_ > 64) {
        heap.resize(static_cast<std::size_t>(stack_need_));
        sp = heap.data();
    }
    sp[0] = 0.0;  // value for the (impossible) empty program
    std::size_t top = 0;
    for (const Instr& in : code_) {
        switch (in.kind) {
            case Kind::constant:
                sp[top++] = static_cast<double>(in.value);
                break;
            case Kind::variable:
                sp[top++] = point[static_cast<std::size_t>(in.value)];
                break;
            case Kind::op:
                switch (in.op) {
                    case Op::add: --top; sp[top - 1] += sp[top]; break;
                    case Op::sub: --top; sp[top - 1] -= sp[top]; break;
                    case Op::mul: --top; sp[top - 1] *= sp[top]; break;
                    case Op::neg: sp[top - 1] = -sp[top - 1]; break;
                    case Op::sqrt: sp[top - 1] = std::sqrt(std::fabs(sp[top - 1])); break;
                    case Op::sin: sp[top - 1] = std::sin(sp[top - 1]); break;
                    case Op::cos: sp[top - 1] = std::cos(sp[top - 1]); break;
                }
                break;
        }
    }
    return sp[0];
}

}  // namespace benchgen
