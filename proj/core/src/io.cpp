#include "acaforge/io.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace acaforge {

Pattern pattern_from(const Configuration& c, const Box& box) {
    Pattern p;
    p.width = box.w;
    p.height = box.h;
    p.cells.reserve(box.size());
    for (std::int64_t row = 0; row < box.h; ++row)
        for (std::int64_t col = 0; col < box.w; ++col) p.cells.push_back(c.at({box.x0 + col, box.y0 + box.h - 1 - row}));
    return p;
}

Pattern pattern_from(const Window& w) {
    Pattern p = pattern_from(w.to_configuration(), w.box());
    p.rule = w.rule().name();
    return p;
}

Configuration to_configuration(const Pattern& p, Cell origin, State background) {
    int dim = p.height > 1 ? 2 : 1;
    Configuration c(Background::uniform(dim, background));
    for (std::int64_t row = 0; row < p.height; ++row)
        for (std::int64_t col = 0; col < p.width; ++col)
            c.set({origin.x + col, origin.y + p.height - 1 - row}, p.at(col, row));
    return c;
}

namespace {

void put_symbol(std::string& out, std::int64_t run, State s) {
    if (run > 1) out += std::to_string(run);
    if (s == 0)
        out += '.';
    else if (s <= 24)
        out += static_cast<char>('A' + s - 1);
    else
        out += "[" + std::to_string(s) + "]";
}

// Splits the body into tokens that must not be broken across lines.
std::vector<std::string> tokens_of(const std::string& body) {
    std::vector<std::string> t;
    std::string cur;
    for (char ch : body) {
        cur += ch;
        bool digit = ch >= '0' && ch <= '9';
        bool open = !cur.empty() && cur.find('[') != std::string::npos && cur.back() != ']';
        if (!digit && !open && !(ch >= 'p' && ch <= 'y')) {
            t.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) t.push_back(cur);
    return t;
}

struct Cursor {
    std::string_view s;
    std::size_t pos = 0, line = 1, col = 1;
    std::size_t line0 = 1, col0 = 0;

    bool done() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    char get() {
        char c = s[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line0 + line - 1, col); }
};

Pattern decode_body(Cursor& cur) {
    std::vector<std::vector<State>> rows(1);
    std::int64_t count = 0;
    bool have_count = false, ended = false;
    auto emit = [&](State s) {
        std::int64_t n = have_count ? count : 1;
        if (n <= 0) cur.fail("zero run length");
        rows.back().insert(rows.back().end(), static_cast<std::size_t>(n), s);
        count = 0;
        have_count = false;
    };
    while (!cur.done()) {
        char ch = cur.peek();
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
            if (have_count) cur.fail("whitespace inside a run");
            cur.get();
            continue;
        }
        cur.get();
        if (ch >= '0' && ch <= '9') {
            count = count * 10 + (ch - '0');
            if (count > (std::int64_t{1} << 31)) cur.fail("run length too large");
            have_count = true;
        } else if (ch == '.' || ch == 'b') {
            emit(0);
        } else if (ch == 'o') {
            emit(1);
        } else if (ch >= 'A' && ch <= 'X') {
            emit(static_cast<State>(ch - 'A' + 1));
        } else if (ch >= 'p' && ch <= 'y') {
            if (cur.done()) cur.fail("truncated multi-letter state");
            char nx = cur.get();
            if (nx < 'A' || nx > 'X') cur.fail("bad multi-letter state");
            emit(static_cast<State>(24 * (ch - 'p' + 1) + (nx - 'A' + 1)));
        } else if (ch == '[') {
            std::int64_t v = 0;
            bool any = false;
            while (!cur.done() && cur.peek() >= '0' && cur.peek() <= '9') {
                v = v * 10 + (cur.get() - '0');
                any = true;
                if (v > 65535) cur.fail("state too large");
            }
            if (!any || cur.done() || cur.get() != ']') cur.fail("bad bracketed state");
            emit(static_cast<State>(v));
        } else if (ch == '$') {
            std::int64_t n = have_count ? count : 1;
            count = 0;
            have_count = false;
            for (std::int64_t i = 0; i < n; ++i) rows.emplace_back();
        } else if (ch == '!') {
            if (have_count) cur.fail("run length before '!'");
            ended = true;
            break;
        } else {
            cur.fail(std::string("unexpected character '") + ch + "'");
        }
    }
    if (!ended) cur.fail("missing '!'");
    Pattern p;
    std::int64_t last = -1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        p.width = std::max(p.width, static_cast<std::int64_t>(rows[r].size()));
        if (!rows[r].empty()) last = static_cast<std::int64_t>(r);
    }
    p.height = last + 1;
    if (p.height == 0) p.width = 0;
    p.cells.assign(static_cast<std::size_t>(p.width * p.height), 0);
    for (std::int64_t r = 0; r < p.height; ++r)
        std::copy(rows[static_cast<std::size_t>(r)].begin(), rows[static_cast<std::size_t>(r)].end(),
                  p.cells.begin() + r * p.width);
    return p;
}

}  // namespace

std::string encode_rle(const Pattern& p) {
    std::string out;
    std::int64_t pending = 0;
    for (std::int64_t row = 0; row < p.height; ++row) {
        if (row > 0) ++pending;
        std::int64_t end = p.width;
        while (end > 0 && p.at(end - 1, row) == 0) --end;
        if (end == 0) continue;
        if (pending > 0) {
            if (pending > 1) out += std::to_string(pending);
            out += '$';
            pending = 0;
        }
        for (std::int64_t col = 0; col < end;) {
            State s = p.at(col, row);
            std::int64_t run = 1;
            while (col + run < end && p.at(col + run, row) == s) ++run;
            put_symbol(out, run, s);
            col += run;
        }
    }
    out += '!';
    return out;
}

Pattern decode_rle(std::string_view body) {
    Cursor cur{body};
    return decode_body(cur);
}

std::string write_pattern(const Pattern& p) {
    std::string out = "x = " + std::to_string(p.width) + ", y = " + std::to_string(p.height);
    if (!p.rule.empty()) out += ", rule = " + p.rule;
    out += '\n';
    std::string line;
    for (auto& t : tokens_of(encode_rle(p))) {
        if (line.size() + t.size() > 70) {
            out += line + '\n';
            line.clear();
        }
        line += t;
    }
    out += line + '\n';
    return out;
}

Pattern read_pattern(std::string_view text) {
    std::size_t pos = 0, line = 1;
    Pattern hdr;
    bool have_header = false;
    // comment and header lines
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        auto ln = text.substr(pos, eol - pos);
        auto first = ln.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || ln[first] == '#') {
            pos = eol + 1;
            ++line;
            continue;
        }
        if (ln[first] == 'x') {
            std::string s(ln);
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) {
                auto eq = item.find('=');
                if (eq == std::string::npos) throw ParseError("bad header item", line, 1);
                auto trim = [](std::string v) {
                    auto a = v.find_first_not_of(" \t\r");
                    auto b = v.find_last_not_of(" \t\r");
                    return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
                };
                auto key = trim(item.substr(0, eq));
                auto val = trim(item.substr(eq + 1));
                try {
                    if (key == "x")
                        hdr.width = std::stoll(val);
                    else if (key == "y")
                        hdr.height = std::stoll(val);
                    else if (key == "rule")
                        hdr.rule = val;
                    else
                        throw ParseError("unknown header key '" + key + "'", line, 1);
                } catch (const std::logic_error&) {
                    throw ParseError("bad header value '" + val + "'", line, 1);
                }
            }
            if (hdr.width < 0 || hdr.height < 0) throw ParseError("negative extent", line, 1);
            have_header = true;
            pos = eol + 1;
            ++line;
        }
        break;
    }
    Cursor cur{pos < text.size() ? text.substr(pos) : std::string_view{}};
    cur.line0 = line;
    Pattern body = decode_body(cur);
    if (!have_header) return body;
    if (body.width > hdr.width || body.height > hdr.height)
        throw ParseError("pattern exceeds header extents", line, 1);
    hdr.cells.assign(static_cast<std::size_t>(hdr.width * hdr.height), 0);
    for (std::int64_t r = 0; r < body.height; ++r)
        for (std::int64_t c = 0; c < body.width; ++c)
            hdr.cells[static_cast<std::size_t>(r * hdr.width + c)] = body.at(c, r);
    return hdr;
}

namespace {

struct TableLayout {
    const char* name;
    std::vector<Cell> order;     // neighbor positions, center excluded
    std::vector<Cell> canonical; // our neighborhood for imports
};

const std::vector<TableLayout>& layouts() {
    static const std::vector<TableLayout> l = {
        {"vonNeumann", {{0, 1}, {1, 0}, {0, -1}, {-1, 0}}, nbhd::von_neumann()},
        {"Moore", {{0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}}, nbhd::moore()},
        {"oneDimensional", {{-1, 0}, {1, 0}}, nbhd::first_neighbors()},
    };
    return l;
}

const TableLayout& layout_for(const RuleTable& rule) {
    std::set<Cell> have(rule.neighborhood().begin(), rule.neighborhood().end());
    for (auto& l : layouts()) {
        std::set<Cell> want(l.order.begin(), l.order.end());
        want.insert({0, 0});
        if (have == want) return l;
    }
    throw Error("rule-table export supports von Neumann, Moore and first-neighbors rules only");
}

std::size_t slot_of(const std::vector<Cell>& nbhd, Cell c) {
    return static_cast<std::size_t>(std::find(nbhd.begin(), nbhd.end(), c) - nbhd.begin());
}

std::vector<std::vector<std::size_t>> symmetry_group(const std::string& sym, std::size_t m) {
    std::vector<std::size_t> id(m);
    std::iota(id.begin(), id.end(), 0);
    std::vector<std::vector<std::size_t>> g{id};
    if (sym == "none") return g;
    if (sym == "permute") {
        g.clear();
        auto p = id;
        do g.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        return g;
    }
    // mirror across the north-south axis
    std::vector<std::size_t> mirror(m);
    for (std::size_t i = 0; i < m; ++i) mirror[i] = (m - i) % m;
    if (m == 2) mirror = {1, 0};
    if (sym == "reflect_horizontal" || sym == "reflect") return {id, mirror};
    if (m == 2) throw Error("unsupported symmetry '" + sym + "' for oneDimensional");
    std::size_t step = m / 4;
    std::vector<std::vector<std::size_t>> rot;
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<std::size_t> p(m);
        for (std::size_t i = 0; i < m; ++i) p[i] = (i + k * step) % m;
        rot.push_back(p);
    }
    if (sym == "rotate4") return rot;
    if (sym == "rotate4reflect") {
        auto out = rot;
        for (auto& r : rot) {
            std::vector<std::size_t> p(m);
            for (std::size_t i = 0; i < m; ++i) p[i] = r[mirror[i]];
            out.push_back(p);
        }
        return out;
    }
    throw Error("unsupported symmetry '" + sym + "'");
}

std::string trim(std::string_view v) {
    auto a = v.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    auto b = v.find_last_not_of(" \t\r");
    return std::string(v.substr(a, b - a + 1));
}

}  // namespace

std::string export_rule_table(const RuleTable& rule) {
    const auto& lay = layout_for(rule);
    std::ostringstream os;
    os << "@RULE " << (rule.name().empty() ? std::string("acaforge") : rule.name()) << "\n";
    os << "@TABLE\n";
    os << "# unlisted neighborhoods leave the cell unchanged\n";
    os << "n_states:" << rule.states() << "\n";
    os << "neighborhood:" << lay.name << "\n";
    os << "symmetries:none\n";
    auto cidx = static_cast<std::size_t>(rule.center_index());
    std::vector<std::size_t> slots;
    for (auto c : lay.order) slots.push_back(slot_of(rule.neighborhood(), c));
    for (std::size_t idx = 0; idx < rule.table_size(); ++idx) {
        if (rule.at(idx) == rule.tuple_of(idx)[cidx]) continue;
        auto t = rule.tuple_of(idx);
        os << t[cidx];
        for (auto s : slots) os << ',' << t[s];
        os << ',' << rule.at(idx) << "\n";
    }
    return os.str();
}

RuleTable import_rule_table(std::string_view text) {
    std::string name;
    int q = 0;
    const TableLayout* lay = nullptr;
    std::string sym = "none";
    std::map<std::string, std::vector<State>> vars;
    std::vector<State> table;
    std::vector<bool> set;
    std::size_t line_no = 0;
    bool in_table = false;
    std::size_t pos = 0;
    std::vector<std::size_t> slots;
    std::vector<std::vector<std::size_t>> group;
    std::size_t cidx = 0;

    auto prepare = [&](std::size_t ln) {
        if (!table.empty()) return;
        if (q <= 0 || !lay) throw ParseError("n_states and neighborhood must precede transitions", ln, 1);
        table.assign(table_size_for(q, lay->canonical.size()), 0);
        set.assign(table.size(), false);
        for (auto c : lay->order) slots.push_back(slot_of(lay->canonical, c));
        cidx = slot_of(lay->canonical, {0, 0});
        group = symmetry_group(sym, lay->order.size());
    };

    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        auto raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        auto hash = raw.find('#');
        std::string ln = trim(raw.substr(0, hash));
        if (ln.empty()) continue;
        if (ln[0] == '@') {
            if (ln.rfind("@RULE", 0) == 0) {
                name = trim(std::string_view(ln).substr(5));
                in_table = false;
            } else {
                in_table = ln == "@TABLE";
            }
            continue;
        }
        if (!in_table) continue;
        if (ln.rfind("n_states:", 0) == 0) {
            try {
                q = std::stoi(ln.substr(9));
            } catch (const std::logic_error&) {
                throw ParseError("bad n_states", line_no, 10);
            }
            if (q < 1 || q > 65535) throw ParseError("n_states out of range", line_no, 10);
            continue;
        }
        if (ln.rfind("neighborhood:", 0) == 0) {
            auto v = trim(std::string_view(ln).substr(13));
            for (auto& l : layouts())
                if (v == l.name) lay = &l;
            if (!lay) throw ParseError("unsupported neighborhood '" + v + "'", line_no, 14);
            continue;
        }
        if (ln.rfind("symmetries:", 0) == 0) {
            sym = trim(std::string_view(ln).substr(11));
            continue;
        }
        if (ln.rfind("var ", 0) == 0) {
            auto eq = ln.find('=');
            auto lb = ln.find('{'), rb = ln.find('}');
            if (eq == std::string::npos || lb == std::string::npos || rb == std::string::npos || rb < lb)
                throw ParseError("bad var declaration", line_no, 1);
            auto vname = trim(std::string_view(ln).substr(4, eq - 4));
            std::vector<State> vals;
            std::stringstream ss(ln.substr(lb + 1, rb - lb - 1));
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (vars.count(item)) {
                    auto& o = vars[item];
                    vals.insert(vals.end(), o.begin(), o.end());
                } else {
                    try {
                        vals.push_back(static_cast<State>(std::stoi(item)));
                    } catch (const std::logic_error&) {
                        throw ParseError("bad var element '" + item + "'", line_no, 1);
                    }
                }
            }
            vars[vname] = vals;
            continue;
        }
        prepare(line_no);
        std::vector<std::string> tok;
        if (ln.find(',') == std::string::npos) {
            for (char ch : ln)
                if (ch != ' ' && ch != '\t') tok.emplace_back(1, ch);
        } else {
            std::stringstream ss(ln);
            std::string item;
            while (std::getline(ss, item, ',')) tok.push_back(trim(item));
        }
        std::size_t m = lay->order.size();
        if (tok.size() != m + 2) throw ParseError("transition has " + std::to_string(tok.size()) + " fields", line_no, 1);
        std::vector<std::string> names;
        for (auto& t : tok)
            if (vars.count(t) && std::find(names.begin(), names.end(), t) == names.end()) names.push_back(t);
        for (auto& t : tok)
            if (!vars.count(t)) {
                bool ok = !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
                if (!ok || std::stoi(t) >= q) throw ParseError("bad state '" + t + "'", line_no, 1);
            }
        std::map<std::string, State> bind;
        std::vector<State> vals(m + 2);
        std::vector<State> tuple(lay->canonical.size());
        std::function<void(std::size_t)> rec = [&](std::size_t k) {
            if (k < names.size()) {
                for (auto v : vars[names[k]]) {
                    if (v >= q) throw ParseError("var value out of range", line_no, 1);
                    bind[names[k]] = v;
                    rec(k + 1);
                }
                return;
            }
            for (std::size_t i = 0; i < tok.size(); ++i)
                vals[i] = vars.count(tok[i]) ? bind[tok[i]] : static_cast<State>(std::stoi(tok[i]));
            for (auto& perm : group) {
                tuple[cidx] = vals[0];
                for (std::size_t i = 0; i < m; ++i) tuple[slots[i]] = vals[1 + perm[i]];
                std::size_t idx = 0;
                for (auto s : tuple) idx = idx * static_cast<std::size_t>(q) + s;
                if (!set[idx]) {
                    set[idx] = true;
                    table[idx] = vals[m + 1];
                }
            }
        };
        rec(0);
    }
    if (q <= 0 || !lay) throw ParseError("missing n_states or neighborhood", line_no, 1);
    prepare(line_no);
    RuleTable id = RuleTable::identity(lay->canonical == nbhd::first_neighbors() ? 1 : 2, q, lay->canonical);
    for (std::size_t i = 0; i < table.size(); ++i)
        if (!set[i]) table[i] = id.at(i);
    RuleTable r(lay->canonical == nbhd::first_neighbors() ? 1 : 2, q, lay->canonical, std::move(table));
    r.set_name(name);
    return r;
}

char state_glyph(State s) {
    if (s == 0) return '.';
    if (s <= 9) return static_cast<char>('0' + s);
    if (s < 36) return static_cast<char>('a' + s - 10);
    return '#';
}

namespace {

std::string pgm(std::int64_t w, std::int64_t h, const std::vector<std::vector<int>>& rows) {
    int maxv = 1;
    for (auto& r : rows)
        for (auto v : r) maxv = std::max(maxv, v);
    std::ostringstream os;
    os << "P2\n" << w << ' ' << h << '\n' << maxv << '\n';
    for (auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << r[i];
        os << '\n';
    }
    return os.str();
}

}  // namespace

std::string render_spacetime(const SpaceTime& st, RenderStyle style) {
    const Box& b = st.box;
    bool two_d = b.h > 1;
    if (style == RenderStyle::Pgm) {
        std::vector<std::vector<int>> rows;
        for (auto& f : st.frames)
            for (std::int64_t row = 0; row < b.h; ++row) {
                std::vector<int> r;
                for (std::int64_t col = 0; col < b.w; ++col)
                    r.push_back(f[static_cast<std::size_t>((b.h - 1 - row) * b.w + col)]);
                rows.push_back(r);
            }
        return pgm(b.w, static_cast<std::int64_t>(rows.size()), rows);
    }
    std::ostringstream os;
    os << "# spacetime " << b.w << 'x' << b.h << " steps " << st.steps();
    if (!st.provenance.empty()) os << ' ' << st.provenance;
    os << '\n';
    for (std::size_t t = 0; t < st.frames.size(); ++t) {
        const auto& f = st.frames[t];
        if (two_d) os << "t=" << t << '\n';
        for (std::int64_t row = 0; row < b.h; ++row) {
            for (std::int64_t col = 0; col < b.w; ++col)
                os << state_glyph(f[static_cast<std::size_t>((b.h - 1 - row) * b.w + col)]);
            os << '\n';
        }
    }
    return os.str();
}

std::string render_history(const UpdateHistory& h, RenderStyle style) {
    std::size_t depth = h.cells() ? h.max_depth() + 1 : 0;
    if (style == RenderStyle::Pgm) {
        std::vector<std::vector<int>> rows(depth, std::vector<int>(h.cells(), 0));
        for (std::size_t d = 0; d < depth; ++d)
            for (std::size_t i = 0; i < h.cells(); ++i)
                if (d < h.of(i).size()) rows[d][i] = h.of(i)[d] + 1;
        return pgm(static_cast<std::int64_t>(h.cells()), static_cast<std::int64_t>(depth), rows);
    }
    std::ostringstream os;
    os << "# history " << h.cells() << " cells depth " << (depth ? depth - 1 : 0) << '\n';
    for (std::size_t d = 0; d < depth; ++d) {
        for (std::size_t i = 0; i < h.cells(); ++i) os << (d < h.of(i).size() ? state_glyph(h.of(i)[d]) : ' ');
        os << '\n';
    }
    return os.str();
}

}  // namespace acaforge
