#include "acaforge/rule.hpp"

#include <algorithm>
#include <set>

namespace acaforge {

namespace nbhd {
std::vector<Cell> one_way() { return {{-1, 0}, {0, 0}}; }
std::vector<Cell> first_neighbors() { return {{-1, 0}, {0, 0}, {1, 0}}; }
std::vector<Cell> von_neumann() { return {{1, 0}, {0, 1}, {0, 0}, {-1, 0}, {0, -1}}; }
std::vector<Cell> moore() {
    auto n = von_neumann();
    n.insert(n.end(), {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
    return n;
}
}  // namespace nbhd

std::size_t table_size_for(int states, std::size_t arity) {
    if (states < 1) throw Error("rule needs at least one state");
    std::size_t n = 1;
    for (std::size_t i = 0; i < arity; ++i) {
        if (n > (std::size_t{1} << 28) / static_cast<std::size_t>(states))
            throw Error("rule table too large: " + std::to_string(states) + "^" + std::to_string(arity));
        n *= static_cast<std::size_t>(states);
    }
    return n;
}

RuleTable::RuleTable(int dimension, int states, std::vector<Cell> neighborhood, std::vector<State> table)
    : dim_(dimension), q_(states), nbhd_(std::move(neighborhood)), table_(std::move(table)) {
    if (dim_ != 1 && dim_ != 2) throw Error("dimension must be 1 or 2");
    if (q_ < 1 || q_ > 65535) throw Error("state count out of range");
    if (nbhd_.empty()) throw Error("empty neighborhood");
    std::set<Cell> seen;
    for (std::size_t i = 0; i < nbhd_.size(); ++i) {
        const Cell& c = nbhd_[i];
        if (dim_ == 1 && c.y != 0) throw Error("1D neighborhood offset with nonzero y");
        if (!seen.insert(c).second) throw Error("duplicate neighborhood offset");
        if (c == Cell{0, 0}) center_ = static_cast<int>(i);
        rx_ = std::max(rx_, c.x < 0 ? -c.x : c.x);
        ry_ = std::max(ry_, c.y < 0 ? -c.y : c.y);
    }
    if (table_.size() != table_size_for(q_, nbhd_.size())) throw Error("rule table is not total");
    for (State s : table_)
        if (s >= q_) throw Error("rule table entry out of range");
}

RuleTable RuleTable::from_function(int dimension, int states, std::vector<Cell> neighborhood,
                                   const LocalFn& f) {
    std::size_t n = table_size_for(states, neighborhood.size());
    std::vector<State> table(n);
    std::vector<State> tup(neighborhood.size(), 0);
    for (std::size_t idx = 0; idx < n; ++idx) {
        table[idx] = f(tup);
        for (std::size_t a = tup.size(); a-- > 0;) {
            if (++tup[a] < states) break;
            tup[a] = 0;
        }
    }
    return RuleTable(dimension, states, std::move(neighborhood), std::move(table));
}

RuleTable RuleTable::wolfram(unsigned code) {
    if (code > 255) throw Error("Wolfram code must be in 0..255");
    std::vector<State> t(8);
    for (unsigned b = 0; b < 8; ++b) t[b] = static_cast<State>((code >> b) & 1u);
    RuleTable r(1, 2, nbhd::first_neighbors(), std::move(t));
    r.set_name("rule-" + std::to_string(code));
    return r;
}

RuleTable RuleTable::identity(int dimension, int states, std::vector<Cell> neighborhood) {
    auto it = std::find(neighborhood.begin(), neighborhood.end(), Cell{0, 0});
    if (it == neighborhood.end()) throw Error("identity rule needs the zero offset");
    std::size_t c = static_cast<std::size_t>(it - neighborhood.begin());
    auto r = from_function(dimension, states, std::move(neighborhood),
                           [c](std::span<const State> t) { return t[c]; });
    r.set_name("identity");
    return r;
}

std::size_t RuleTable::index_of(std::span<const State> tuple) const {
    std::size_t idx = 0;
    for (State s : tuple) idx = idx * static_cast<std::size_t>(q_) + s;
    return idx;
}

std::vector<State> RuleTable::tuple_of(std::size_t index) const {
    std::vector<State> t(nbhd_.size());
    for (std::size_t a = t.size(); a-- > 0;) {
        t[a] = static_cast<State>(index % static_cast<std::size_t>(q_));
        index /= static_cast<std::size_t>(q_);
    }
    return t;
}

bool RuleTable::is_identity() const {
    if (center_ < 0) return false;
    for (std::size_t i = 0; i < table_.size(); ++i)
        if (tuple_of(i)[static_cast<std::size_t>(center_)] != table_[i]) return false;
    return true;
}

}  // namespace acaforge
