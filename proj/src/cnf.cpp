#include "symscope/cnf.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "symscope/errors.hpp"

namespace symscope {

namespace {

std::string clause_key(const std::vector<int>& sorted_lits) {
    std::string key;
    key.reserve(sorted_lits.size() * 4);
    for (int l : sorted_lits) {
        key.append(reinterpret_cast<const char*>(&l), sizeof(int));
    }
    return key;
}

} // namespace

CnfFormula CnfFormula::make(int n_vars, std::vector<std::vector<int>> clauses) {
    CnfFormula f;
    f.n_vars = n_vars;
    std::unordered_map<std::string, int> seen;
    for (auto& cl : clauses) {
        std::sort(cl.begin(), cl.end());
        cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
        for (std::size_t i = 0; i < cl.size(); ++i) {
            if (cl[i] < 0 || cl[i] >= 2 * n_vars)
                throw ContractError("literal out of range");
            if (i + 1 < cl.size() && cl[i + 1] == negate_lit(cl[i]) && (cl[i] & 1) == 0)
                throw ContractError("tautological clause");
        }
        auto [it, fresh] = seen.emplace(clause_key(cl), 1);
        if (!fresh) throw ContractError("duplicate clause");
        f.clauses.push_back(std::move(cl));
    }
    return f;
}

CnfFormula CnfFormula::from_dimacs_clauses(int n_vars, const std::vector<std::vector<int>>& cls) {
    std::vector<std::vector<int>> idx_clauses;
    idx_clauses.reserve(cls.size());
    for (auto& cl : cls) {
        std::vector<int> c;
        c.reserve(cl.size());
        for (int l : cl) c.push_back(lit_index(l));
        idx_clauses.push_back(std::move(c));
    }
    return make(n_vars, std::move(idx_clauses));
}

CnfFormula parse_dimacs(std::istream& in) {
    std::string line;
    int n_vars = -1, n_clauses = -1;
    std::vector<std::vector<int>> clauses;
    std::vector<int> current;
    bool in_clause = false;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == 'c') continue;
        if (line[0] == 'p') {
            if (n_vars >= 0) throw ParseError("duplicate header", line_no);
            std::istringstream hs(line);
            std::string p, fmt;
            hs >> p >> fmt >> n_vars >> n_clauses;
            if (hs.fail() || fmt != "cnf" || n_vars < 0 || n_clauses < 0)
                throw ParseError("malformed header '" + line + "'", line_no);
            continue;
        }
        if (n_vars < 0) throw ParseError("clause before header", line_no);
        std::istringstream ls(line);
        long long lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (static_cast<int>(clauses.size()) >= n_clauses)
                    throw ParseError("more clauses than header declares", line_no);
                std::sort(current.begin(), current.end());
                for (std::size_t i = 0; i + 1 < current.size(); ++i) {
                    if (current[i] == current[i + 1]) {
                        current.erase(current.begin() + i + 1);
                        --i;
                    }
                }
                for (std::size_t i = 0; i + 1 < current.size(); ++i)
                    if ((current[i] & 1) == 0 && current[i + 1] == negate_lit(current[i]))
                        throw ParseError(
                            "tautological clause (contains a variable and its negation); "
                            "the model-graph construction requires clause = literal set",
                            line_no);
                clauses.push_back(current);
                current.clear();
                in_clause = false;
            } else {
                long long v = lit > 0 ? lit : -lit;
                if (v > n_vars)
                    throw ParseError("literal " + std::to_string(lit) + " out of range", line_no);
                current.push_back(lit_index(static_cast<int>(lit)));
                in_clause = true;
            }
        }
        if (!ls.eof()) throw ParseError("unexpected token in clause", line_no);
    }
    if (n_vars < 0) throw ParseError("missing header", line_no);
    if (in_clause || !current.empty()) throw ParseError("clause missing 0 terminator", line_no);
    if (static_cast<int>(clauses.size()) != n_clauses)
        throw ParseError("header declares " + std::to_string(n_clauses) + " clauses, found " +
                             std::to_string(clauses.size()),
                         line_no);
    std::unordered_map<std::string, int> seen;
    for (auto& cl : clauses)
        if (!seen.emplace(clause_key(cl), 1).second)
            throw ParseError("duplicate clause", line_no);
    CnfFormula f;
    f.n_vars = n_vars;
    f.clauses = std::move(clauses);
    return f;
}

CnfFormula parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

int ModelGraph::find_clause(const std::vector<int>& sorted_lit_idx) const {
    auto it = clause_lookup_.find(clause_key(sorted_lit_idx));
    return it == clause_lookup_.end() ? -1 : it->second;
}

ModelGraph model_graph(const CnfFormula& f) {
    ModelGraph m;
    m.formula = f;
    m.n_vars = f.n_vars;
    m.n_clauses = static_cast<int>(f.clauses.size());
    ColoredGraph g(2 * f.n_vars + m.n_clauses);
    std::vector<int> colors(g.n, 1);
    for (int j = 0; j < m.n_clauses; ++j) colors[2 * f.n_vars + j] = 0;
    // Literals carry color 1, clauses color 0; contiguous renumbering keeps
    // clause=0 / literal=1 when both are present.
    Coloring cc = Coloring::from_colors(colors);
    g.set_colors(cc.color, cc.num_classes);
    for (int v = 0; v < f.n_vars; ++v) g.add_undirected_edge(2 * v, 2 * v + 1);
    for (int j = 0; j < m.n_clauses; ++j) {
        for (int l : f.clauses[j]) g.add_undirected_edge(l, m.clause_vertex(j));
        m.clause_lookup_.emplace(clause_key(f.clauses[j]), j);
    }
    g.seal();
    m.graph = std::move(g);
    return m;
}

Permutation lift_literal_perm(const ModelGraph& m, const Permutation& p) {
    if (p.degree() != 2 * m.n_vars)
        throw ContractError("lift: permutation degree is not the literal count");
    for (auto& [l, img] : p.moved()) {
        if (p.apply(negate_lit(l)) != negate_lit(img))
            throw ContractError("lift: permutation is not negation-consistent");
    }
    std::vector<std::pair<int, int>> moved(p.moved());
    for (int j = 0; j < m.n_clauses; ++j) {
        std::vector<int> image;
        image.reserve(m.formula.clauses[j].size());
        bool changed = false;
        for (int l : m.formula.clauses[j]) {
            int il = p.apply(l);
            changed |= (il != l);
            image.push_back(il);
        }
        if (!changed) continue;
        std::sort(image.begin(), image.end());
        int target = m.find_clause(image);
        if (target < 0)
            throw ContractError("lift: image of clause " + std::to_string(j) +
                                " is not a clause of the formula");
        if (target != j) moved.emplace_back(m.clause_vertex(j), m.clause_vertex(target));
    }
    return Permutation::from_moved(m.graph.n, std::move(moved));
}

Permutation project_vertex_perm(const ModelGraph& m, const Permutation& p) {
    if (p.degree() != m.graph.n)
        throw ContractError("project: permutation degree is not the vertex count");
    std::vector<std::pair<int, int>> moved;
    for (auto& [v, img] : p.moved()) {
        if (m.is_literal_vertex(v) != m.is_literal_vertex(img))
            throw ContractError("project: permutation does not fix the literal/clause bipartition");
        if (m.is_literal_vertex(v)) moved.emplace_back(v, img);
    }
    return Permutation::from_moved(2 * m.n_vars, std::move(moved));
}

Permutation parse_literal_cycles(std::string_view text, int n_vars) {
    return parse_cycles_mapped(text, 2 * n_vars, true, [n_vars](long long label, std::size_t pos) {
        long long v = label > 0 ? label : -label;
        if (v < 1 || v > n_vars)
            throw ParseError("literal label out of range 1.." + std::to_string(n_vars), pos);
        return lit_index(static_cast<int>(label));
    });
}

std::string format_literal_cycles(const Permutation& p) {
    return format_cycles_mapped(p, [](int idx) { return std::to_string(dimacs_lit(idx)); });
}

namespace {

GeneratingSet read_gens(std::istream& in, int degree,
                        const std::function<Permutation(const std::string&)>& parse_one) {
    std::vector<Permutation> gens;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        try {
            gens.push_back(parse_one(line));
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()) + " on line " + std::to_string(line_no));
        }
    }
    return GeneratingSet(degree, std::move(gens));
}

} // namespace

GeneratingSet read_generator_file(std::istream& in, int n_vars) {
    return read_gens(in, 2 * n_vars,
                     [n_vars](const std::string& s) { return parse_literal_cycles(s, n_vars); });
}

GeneratingSet read_vertex_generator_file(std::istream& in, int degree) {
    return read_gens(in, degree,
                     [degree](const std::string& s) { return parse_cycles(s, degree); });
}

} // namespace symscope
