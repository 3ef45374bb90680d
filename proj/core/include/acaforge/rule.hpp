#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace acaforge {

using State = std::uint16_t;

/// Lattice coordinate. 1D rules leave y at zero.
struct Cell {
    std::int64_t x = 0;
    std::int64_t y = 0;

    constexpr auto operator<=>(const Cell&) const = default;
    constexpr Cell operator+(Cell o) const { return {x + o.x, y + o.y}; }
    constexpr Cell operator-(Cell o) const { return {x - o.x, y - o.y}; }
    constexpr Cell operator-() const { return {-x, -y}; }
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidConfiguration : Error {
    using Error::Error;
};
struct IneligibleRule : Error {
    using Error::Error;
};

namespace nbhd {
std::vector<Cell> one_way();          // (-1, 0)
std::vector<Cell> first_neighbors();  // (-1, 0, 1)
/// (1,0), (0,1), (0,0), (-1,0), (0,-1)
std::vector<Cell> von_neumann();
/// von Neumann order followed by the four diagonals.
std::vector<Cell> moore();
}  // namespace nbhd

/// Local rule f: S^k -> S. The table is indexed mixed-radix with the
/// first neighborhood offset most significant, so Wolfram's (l,c,r)
/// lands at 4l + 2c + r.
class RuleTable {
public:
    using LocalFn = std::function<State(std::span<const State>)>;

    RuleTable() = default;
    RuleTable(int dimension, int states, std::vector<Cell> neighborhood, std::vector<State> table);

    static RuleTable from_function(int dimension, int states, std::vector<Cell> neighborhood,
                                   const LocalFn& f);
    static RuleTable wolfram(unsigned code);
    static RuleTable identity(int dimension, int states, std::vector<Cell> neighborhood);

    int dimension() const { return dim_; }
    int states() const { return q_; }
    std::size_t arity() const { return nbhd_.size(); }
    const std::vector<Cell>& neighborhood() const { return nbhd_; }
    const std::vector<State>& table() const { return table_; }
    std::size_t table_size() const { return table_.size(); }

    /// Position of the zero offset in the neighborhood, or -1.
    int center_index() const { return center_; }
    /// Largest |offset| component per axis.
    std::int64_t radius_x() const { return rx_; }
    std::int64_t radius_y() const { return ry_; }

    std::size_t index_of(std::span<const State> tuple) const;
    std::vector<State> tuple_of(std::size_t index) const;
    State operator()(std::span<const State> tuple) const { return table_[index_of(tuple)]; }
    State at(std::size_t index) const { return table_[index]; }

    bool is_identity() const;

    const std::string& name() const { return name_; }
    RuleTable& set_name(std::string n) {
        name_ = std::move(n);
        return *this;
    }

    bool operator==(const RuleTable& o) const {
        return dim_ == o.dim_ && q_ == o.q_ && nbhd_ == o.nbhd_ && table_ == o.table_;
    }

private:
    int dim_ = 1;
    int q_ = 1;
    std::vector<Cell> nbhd_;
    std::vector<State> table_;
    int center_ = -1;
    std::int64_t rx_ = 0, ry_ = 0;
    std::string name_;
};

/// q^k, throwing when the table would not fit in memory.
std::size_t table_size_for(int states, std::size_t arity);

}  // namespace acaforge
