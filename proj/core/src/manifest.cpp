#include <acaforge/circuits.hpp>
#include <acaforge/io.hpp>
#include <acaforge/manifest.hpp>
#include <acaforge/oneway.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace acaforge {

namespace {

std::string trim(std::string s) {
    auto sp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && sp(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && sp(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(i);
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<State> parse_word(const std::string& w) {
    std::vector<State> v;
    if (w.find(',') != std::string::npos) {
        std::istringstream in(w);
        for (std::string tok; std::getline(in, tok, ',');) {
            tok = trim(tok);
            if (!all_digits(tok)) throw ManifestError("bad state '" + tok + "'");
            v.push_back(static_cast<State>(std::stoul(tok)));
        }
        return v;
    }
    for (char c : w) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw ManifestError(std::string("bad state '") + c + "'");
        v.push_back(static_cast<State>(c - '0'));
    }
    return v;
}

std::map<std::string, std::string> parse_pairs(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ManifestError("manifest line " + std::to_string(n) + ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

template <class T>
T number(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        T out;
        if constexpr (std::is_floating_point_v<T>)
            out = static_cast<T>(std::stod(v, &used));
        else if constexpr (std::is_signed_v<T>)
            out = static_cast<T>(std::stoll(v, &used));
        else
            out = static_cast<T>(std::stoull(v, &used));
        if (used != v.size()) throw ManifestError("");
        return out;
    } catch (const std::exception&) {
        throw ManifestError("bad value for " + key + ": '" + v + "'");
    }
}

}  // namespace

std::optional<HostSpec> parse_host_spec(const std::string& spec) {
    auto open = spec.find('(');
    if (open == std::string::npos || spec.back() != ')') return std::nullopt;
    std::string head = spec.substr(0, open);
    if (head == "shifting-mv") head = "smv3q";
    if (head == "mountain-valley") head = "mv4q";
    if (head == "marching-soldiers") head = "soldiers";
    if (head == "one-way-packing") head = "pack2";
    auto c = construction_from_string(head);
    if (!c) return std::nullopt;
    return HostSpec{*c, spec.substr(open + 1, spec.size() - open - 2)};
}

RuleTable parse_rule_spec(const std::string& raw) {
    const std::string spec = trim(raw);
    if (all_digits(spec)) {
        auto code = std::stoul(spec);
        if (code > 255) throw ManifestError("Wolfram code must be 0..255");
        return RuleTable::wolfram(static_cast<unsigned>(code));
    }
    if (spec == "rule-x") return build_rule_x();
    if (spec == "parity-vn") {
        auto r = RuleTable::from_function(2, 2, nbhd::von_neumann(), [](std::span<const State> t) {
            int s = 0;
            for (State v : t) s += v;
            return static_cast<State>(s % 2);
        });
        return r.set_name("parity-vn");
    }
    if (spec.rfind("oneway(", 0) == 0 && spec.back() == ')') {
        auto body = spec.substr(7, spec.size() - 8);
        auto colon = body.find(':');
        if (colon == std::string::npos) throw ManifestError("oneway spec is oneway(q:table)");
        int q = number<int>("q", body.substr(0, colon));
        auto r = one_way_rule(q, parse_word(body.substr(colon + 1)));
        return r.set_name(spec);
    }
    if (auto h = parse_host_spec(spec)) {
        auto host = compile(h->construction, parse_rule_spec(h->guest)).host;
        return host.set_name(spec);
    }
    if (spec.size() > 6 && spec.substr(spec.size() - 6) == ".table") return import_rule_table(slurp(spec));
    throw ManifestError("unknown rule spec '" + spec + "'");
}

UpdateSchedule ScheduleSpec::build() const {
    if (kind == "synchronous") return UpdateSchedule::synchronous();
    if (kind == "alpha") return UpdateSchedule::alpha(alpha, seed);
    if (kind == "fair-random") return UpdateSchedule::fair_random(seed, window, density);
    for (auto o : {SweepOrder::LeftToRight, SweepOrder::RightToLeft, SweepOrder::BottomToTop, SweepOrder::TopToBottom})
        if (kind == std::string("sweep-") + to_string(o)) return UpdateSchedule::sweep(o);
    throw ManifestError("unknown schedule kind '" + kind + "'");
}

Configuration parse_init_spec(const std::string& spec, const RuleTable& rule, std::int64_t origin) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw ManifestError("init spec needs a kind, e.g. word:0110");
    std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
    Configuration c;
    if (kind == "word") {
        c = Configuration::from_word(parse_word(arg), origin);
        if (rule.dimension() == 2) {
            auto z = Configuration::zeros(2);
            for (const auto& [cell, s] : c.overrides()) z.set(cell, s);
            c = z;
        }
    } else if (kind == "ring") {
        c = Configuration(Background::periodic_1d(parse_word(arg)));
    } else if (kind == "random") {
        auto c2 = arg.find(':');
        if (c2 == std::string::npos) throw ManifestError("random init is random:WIDTH:SEED");
        auto w = number<std::size_t>("width", arg.substr(0, c2));
        std::mt19937_64 rng(number<std::uint64_t>("seed", arg.substr(c2 + 1)));
        std::vector<State> v(w);
        for (auto& s : v) s = static_cast<State>(rng() % static_cast<unsigned>(rule.states()));
        c = Configuration::from_word(v, origin);
    } else if (kind == "rle") {
        c = to_configuration(read_pattern(slurp(arg)), {origin, 0});
    } else {
        throw ManifestError("unknown init kind '" + kind + "'");
    }
    if (c.dimension() != rule.dimension()) throw ManifestError("init dimension does not match the rule");
    c.validate(rule.states());
    return c;
}

ExperimentManifest ExperimentManifest::parse(const std::string& text) {
    ExperimentManifest m;
    for (const auto& [k, v] : parse_pairs(text)) {
        if (k == "rule") m.rule = v;
        else if (k == "init") m.init = v;
        else if (k == "origin") m.origin = number<std::int64_t>(k, v);
        else if (k == "schedule") m.schedule.kind = v;
        else if (k == "seed") m.schedule.seed = number<std::uint64_t>(k, v);
        else if (k == "alpha") m.schedule.alpha = number<double>(k, v);
        else if (k == "window") m.schedule.window = number<std::size_t>(k, v);
        else if (k == "density") m.schedule.density = number<double>(k, v);
        else if (k == "steps") m.steps = number<std::size_t>(k, v);
        else if (k == "history") m.history = v;
        else if (k == "spacetime") m.spacetime = v;
        else if (k == "render") m.render = v;
        else throw ManifestError("unknown manifest key '" + k + "'");
    }
    return m;
}

std::string ExperimentManifest::write() const {
    std::ostringstream o;
    o << "rule = " << rule << "\ninit = " << init << "\norigin = " << origin << "\nschedule = " << schedule.kind
      << "\nseed = " << schedule.seed << "\nalpha = " << schedule.alpha << "\nwindow = " << schedule.window
      << "\ndensity = " << schedule.density << "\nsteps = " << steps << "\n";
    if (!history.empty()) o << "history = " << history << "\n";
    if (!spacetime.empty()) o << "spacetime = " << spacetime << "\n";
    if (!render.empty()) o << "render = " << render << "\n";
    return o.str();
}

ContractManifest ContractManifest::parse(const std::string& text) {
    ContractManifest m;
    bool have_guest = false, have_c = false;
    for (const auto& [k, v] : parse_pairs(text)) {
        if (k == "guest") {
            m.guest = v;
            have_guest = true;
        } else if (k == "construction") {
            auto c = construction_from_string(v);
            if (!c) throw ManifestError("unknown construction '" + v + "'");
            m.construction = *c;
            have_c = true;
        } else if (k == "host_states") m.host_states = number<int>(k, v);
        else if (k == "k") m.k = number<std::size_t>(k, v);
        else if (k == "l") m.l = number<std::size_t>(k, v);
        else if (k == "host_table") m.host_table = v;
        else throw ManifestError("unknown contract key '" + k + "'");
    }
    if (!have_guest || !have_c) throw ManifestError("contract needs guest and construction");
    return m;
}

std::string ContractManifest::write() const {
    std::ostringstream o;
    o << "guest = " << guest << "\nconstruction = " << to_string(construction) << "\nhost_states = " << host_states
      << "\nk = " << k << "\nl = " << l << "\n";
    if (!host_table.empty()) o << "host_table = " << host_table << "\n";
    return o.str();
}

}  // namespace acaforge
