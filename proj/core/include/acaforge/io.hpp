#pragma once

#include <string_view>

#include "acaforge/engine.hpp"

namespace acaforge {

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)), line(line), column(column) {}
    std::size_t line, column;
};

/// Rectangular pattern, rows stored top row first.
struct Pattern {
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::vector<State> cells;
    std::string rule;

    State at(std::int64_t col, std::int64_t row) const {
        return cells[static_cast<std::size_t>(row * width + col)];
    }
    bool operator==(const Pattern&) const = default;
};

/// Top row of the pattern is the box's largest y.
Pattern pattern_from(const Configuration& c, const Box& box);
Pattern pattern_from(const Window& w);
/// Places the pattern with its bottom-left cell at `origin`.
Configuration to_configuration(const Pattern& p, Cell origin = {0, 0}, State background = 0);

/// Body only: '.' = 0, 'A'..'X' = 1..24, "[n]" above 24, '$' ends a row,
/// '!' ends the pattern. Trailing zeros of a row and trailing empty rows
/// are dropped. [1,1,2] gives "2AB!".
std::string encode_rle(const Pattern& p);
/// Extents come from the longest row and the row count.
Pattern decode_rle(std::string_view body);

/// Header line "x = W, y = H, rule = R" then the body wrapped at 70 columns.
std::string write_pattern(const Pattern& p);
Pattern read_pattern(std::string_view text);

/// Rule-table text: "@RULE", "@TABLE", n_states, neighborhood
/// (vonNeumann, Moore or oneDimensional), symmetries:none and one
/// "C,<neighbors>,C'" line per active transition. Unlisted cells keep their
/// state. North is +y.
std::string export_rule_table(const RuleTable& rule);
/// Accepts var declarations (a variable repeated on one line binds the same
/// value) and symmetries none, rotate4, rotate4reflect, reflect_horizontal
/// and permute. The first matching line wins.
RuleTable import_rule_table(std::string_view text);

enum class RenderStyle { Text, Pgm };

/// 1D: one row per frame, time downward. 2D: frames top row first, each
/// preceded by "t=N".
std::string render_spacetime(const SpaceTime& st, RenderStyle style = RenderStyle::Text);
/// Row d holds each cell's d-th history entry; cells that never got that
/// deep show ' ' (Text) or 0 (Pgm). 1D only.
std::string render_history(const UpdateHistory& h, RenderStyle style = RenderStyle::Text);

/// Character used for a state in text renderings: '.', then 1-9, then
/// a-z, then '#'.
char state_glyph(State s);

}  // namespace acaforge
