#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "symscope/graph.hpp"
#include "symscope/perm.hpp"

namespace symscope {

// Literal indexing: DIMACS literal +v maps to 2(v-1), -v to 2(v-1)+1.
inline int lit_index(int dimacs_lit) {
    int v = dimacs_lit > 0 ? dimacs_lit : -dimacs_lit;
    return 2 * (v - 1) + (dimacs_lit < 0 ? 1 : 0);
}
inline int dimacs_lit(int lit_idx) {
    int v = lit_idx / 2 + 1;
    return (lit_idx & 1) ? -v : v;
}
inline int negate_lit(int lit_idx) { return lit_idx ^ 1; }
inline int var_of_lit(int lit_idx) { return lit_idx / 2 + 1; }

// CNF formula; clauses stored as sorted sets of literal indices.
struct CnfFormula {
    int n_vars = 0;
    std::vector<std::vector<int>> clauses;

    // Validates ranges, sorts clauses, rejects duplicate literals, tautological
    // clauses and duplicate clauses.
    static CnfFormula make(int n_vars, std::vector<std::vector<int>> clauses_lit_idx);
    static CnfFormula from_dimacs_clauses(int n_vars, const std::vector<std::vector<int>>& cls);

    int num_literals() const { return 2 * n_vars; }
};

// DIMACS cnf: comment lines 'c ...', header 'p cnf <vars> <clauses>',
// 0-terminated clauses. Tautological clauses, duplicate clauses and
// header/clause-count mismatches are rejected.
CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs(const std::string& text);

// Model graph of a formula: one vertex per literal (color 1) and per clause
// (color 0); edges l - ~l and l - C for l in C. Literal l sits at vertex
// lit_index(l); clause j at vertex 2*n_vars + j.
struct ModelGraph {
    ColoredGraph graph;
    CnfFormula formula;
    int n_vars = 0;
    int n_clauses = 0;

    int lit_vertex(int lit_idx) const { return lit_idx; }
    int clause_vertex(int clause_idx) const { return 2 * n_vars + clause_idx; }
    bool is_literal_vertex(int v) const { return v < 2 * n_vars; }

    // clause literal set -> clause index
    int find_clause(const std::vector<int>& sorted_lit_idx) const;

private:
    friend ModelGraph model_graph(const CnfFormula&);
    std::unordered_map<std::string, int> clause_lookup_;
};

ModelGraph model_graph(const CnfFormula& f);

// Extends a negation-consistent literal permutation fixing the clause set to
// the full vertex permutation of the model graph.
Permutation lift_literal_perm(const ModelGraph& m, const Permutation& p);

// Restriction of a vertex permutation to the literal vertices. The permutation
// must fix the literal/clause bipartition setwise.
Permutation project_vertex_perm(const ModelGraph& m, const Permutation& p);

// Parses one permutation in signed-literal cycle notation, e.g.
// "(1,2,3)(-1,-2,-3)". Domain is the 2*n_vars literal indices.
Permutation parse_literal_cycles(std::string_view text, int n_vars);
std::string format_literal_cycles(const Permutation& p);

// Reads a generator file: one permutation per line, '#' comments and blank
// lines ignored. With vertex_domain the labels are 1-based vertex ids over a
// domain of `degree` points instead of signed literals.
GeneratingSet read_generator_file(std::istream& in, int n_vars);
GeneratingSet read_vertex_generator_file(std::istream& in, int degree);

} // namespace symscope
