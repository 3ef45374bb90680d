#pragma once

#include <acaforge/compilers.hpp>
#include <acaforge/config.hpp>
#include <acaforge/rule.hpp>
#include <acaforge/schedule.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace acaforge {

struct ManifestError : Error {
    using Error::Error;
};

/// "smv3q(110)" and friends: a construction applied to a guest spec.
struct HostSpec {
    Construction construction;
    std::string guest;
};
std::optional<HostSpec> parse_host_spec(const std::string& spec);

/// Accepts a Wolfram code ("110"), "rule-x", "parity-vn", "oneway(q:table)"
/// with one digit per entry, a construction spec such as "soldiers(150)"
/// ("shifting-mv" is an alias of smv3q), or a path to a .table file.
RuleTable parse_rule_spec(const std::string& spec);

/// Kinds: synchronous, alpha, fair-random, sweep-left-to-right,
/// sweep-right-to-left, sweep-bottom-to-top, sweep-top-to-bottom.
struct ScheduleSpec {
    std::string kind = "synchronous";
    std::uint64_t seed = 0;
    double alpha = 0.5;
    std::size_t window = 0;
    double density = 0.0;

    UpdateSchedule build() const;
};

/// "word:0110" or "word:0,1,12" on cells origin.., "ring:0110" periodic,
/// "random:W:SEED" over the rule's states, "rle:PATH" for a pattern file.
Configuration parse_init_spec(const std::string& spec, const RuleTable& rule, std::int64_t origin = 0);

/// key = value lines; '#' starts a comment.
struct ExperimentManifest {
    std::string rule = "110";
    std::string init = "word:1";
    std::int64_t origin = 0;
    ScheduleSpec schedule;
    std::size_t steps = 16;
    std::string history;
    std::string spacetime;
    std::string render;

    static ExperimentManifest parse(const std::string& text);
    std::string write() const;
};

/// Written by compile, read by verify.
struct ContractManifest {
    std::string guest;
    Construction construction = Construction::MarchingSoldiers;
    int host_states = 0;
    std::size_t k = 1;
    std::size_t l = 1;
    std::string host_table;

    static ContractManifest parse(const std::string& text);
    std::string write() const;
};

}  // namespace acaforge
