#include "takeover/spec_io.hpp"

#include "takeover/errors.hpp"
#include "takeover/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace takeover {

namespace {

using nlohmann::json;

#include "bundled_examples.inc"

struct Collector {
    std::vector<std::string> issues;

    void add(const std::string& path, const std::string& msg) { issues.push_back(path + ": " + msg); }
    bool ok() const { return issues.empty(); }
    void throw_if_any() const {
        if (!issues.empty()) throw SpecError(issues);
    }
};

const char* type_name(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return "null";
        case json::value_t::object: return "an object";
        case json::value_t::array: return "an array";
        case json::value_t::string: return "a string";
        case json::value_t::boolean: return "a boolean";
        case json::value_t::number_integer:
        case json::value_t::number_unsigned:
        case json::value_t::number_float: return "a number";
        default: return "an unsupported value";
    }
}

void check_keys(const json& obj, const std::string& path, const std::vector<std::string>& allowed,
                Collector& c) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            c.add(path.empty() ? "document" : path, "unknown key \"" + it.key() + "\"");
    }
}

std::string opt_string(const json& doc, const char* key, Collector& c) {
    if (!doc.contains(key)) return {};
    if (!doc[key].is_string()) {
        c.add(key, std::string("expected a string, got ") + type_name(doc[key]));
        return {};
    }
    return doc[key].get<std::string>();
}

long req_int(const json& doc, const std::string& path, const char* key, long lo, long hi, Collector& c) {
    if (!doc.contains(key)) {
        c.add(path.empty() ? key : path + "." + key, "missing");
        return lo;
    }
    const json& j = doc[key];
    std::string p = path.empty() ? key : path + "." + key;
    if (!j.is_number_integer()) {
        c.add(p, std::string("expected an integer, got ") + type_name(j));
        return lo;
    }
    long v = j.get<long>();
    if (v < lo || v > hi) {
        c.add(p, "must be in " + std::to_string(lo) + ".." + std::to_string(hi) + ", got " + std::to_string(v));
        return lo;
    }
    return v;
}

/// Node names: unique non-empty strings; indices follow array order.
std::vector<std::string> read_node_names(const json& doc, Collector& c) {
    std::vector<std::string> names;
    if (!doc.contains("nodes")) {
        c.add("nodes", "missing");
        return names;
    }
    const json& j = doc["nodes"];
    if (!j.is_array() || j.empty()) {
        c.add("nodes", "expected a non-empty array of node names");
        return names;
    }
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string() || j[i].get<std::string>().empty()) {
            c.add("nodes[" + std::to_string(i) + "]", "expected a non-empty string");
            names.push_back("#" + std::to_string(i));
            continue;
        }
        names.push_back(j[i].get<std::string>());
    }
    for (size_t i = 0; i < names.size(); ++i)
        for (size_t k = i + 1; k < names.size(); ++k)
            if (names[i] == names[k])
                c.add("nodes[" + std::to_string(k) + "]", "duplicate node name \"" + names[k] + "\"");
    return names;
}

int resolve_node(const json& j, const std::string& path, const std::vector<std::string>& names,
                 Collector& c) {
    if (j.is_string()) {
        auto it = std::find(names.begin(), names.end(), j.get<std::string>());
        if (it == names.end()) {
            c.add(path, "unknown node \"" + j.get<std::string>() + "\"");
            return -1;
        }
        return (int)(it - names.begin());
    }
    if (j.is_number_integer()) {
        long v = j.get<long>();
        if (v < 0 || v >= (long)names.size()) {
            c.add(path, "node index " + std::to_string(v) + " outside 0.." + std::to_string(names.size() - 1));
            return -1;
        }
        return (int)v;
    }
    c.add(path, std::string("expected a node name or index, got ") + type_name(j));
    return -1;
}

std::vector<std::pair<int, int>> read_edges(const json& doc, const std::vector<std::string>& names,
                                            Collector& c) {
    std::vector<std::pair<int, int>> edges;
    if (!doc.contains("edges")) {
        c.add("edges", "missing");
        return edges;
    }
    const json& j = doc["edges"];
    if (!j.is_array()) {
        c.add("edges", std::string("expected an array of [from, to] pairs, got ") + type_name(j));
        return edges;
    }
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string p = "edges[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 2) {
            c.add(p, "expected a [from, to] pair");
            continue;
        }
        int from = resolve_node(j[i][0], p + "[0]", names, c);
        int to = resolve_node(j[i][1], p + "[1]", names, c);
        if (from >= 0 && to >= 0) edges.emplace_back(from, to);
    }
    return edges;
}

/// Per-node coefficient table: a bare number broadcasts to every node and
/// stage; an object maps node name -> number (all stages) or array (one
/// entry per stage).
Table read_node_table(const json& doc, const std::string& path, int rows,
                      const std::vector<std::string>& names, Collector& c) {
    Table out(rows, std::vector<double>(names.size(), 0.0));
    if (doc.is_null()) {
        c.add(path, "missing");
        return out;
    }
    if (doc.is_number()) {
        double v = doc.get<double>();
        for (auto& row : out) std::fill(row.begin(), row.end(), v);
        return out;
    }
    if (!doc.is_object()) {
        c.add(path, std::string("expected a number or an object keyed by node name, got ") + type_name(doc));
        return out;
    }
    std::vector<bool> seen(names.size(), false);
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        auto found = std::find(names.begin(), names.end(), it.key());
        if (found == names.end()) {
            c.add(path + "." + it.key(), "unknown node");
            continue;
        }
        const int v = (int)(found - names.begin());
        seen[v] = true;
        const json& cell = it.value();
        const std::string p = path + "." + it.key();
        if (cell.is_number()) {
            for (int t = 0; t < rows; ++t) out[t][v] = cell.get<double>();
        } else if (cell.is_array()) {
            if ((int)cell.size() != rows) {
                c.add(p, "expected " + std::to_string(rows) + " stage entries, got " + std::to_string(cell.size()));
                continue;
            }
            for (int t = 0; t < rows; ++t) {
                if (!cell[t].is_number()) {
                    c.add(p + "[" + std::to_string(t) + "]", std::string("expected a number, got ") +
                                                                 type_name(cell[t]));
                    continue;
                }
                out[t][v] = cell[t].get<double>();
            }
        } else {
            c.add(p, std::string("expected a number or a per-stage array, got ") + type_name(cell));
        }
    }
    for (size_t v = 0; v < names.size(); ++v)
        if (!seen[v]) c.add(path, "missing entry for node \"" + names[v] + "\"");
    return out;
}

struct CostBlocks {
    Table f, g, d, a;
};

CostBlocks read_cost_blocks(const json& doc, int horizon, const std::vector<std::string>& names,
                            Collector& c) {
    CostBlocks b;
    if (!doc.contains("dynamics") || !doc["dynamics"].is_object()) {
        c.add("dynamics", "missing or not an object");
        b.f = Table(horizon, std::vector<double>(names.size(), 1.0));
    } else {
        check_keys(doc["dynamics"], "dynamics", {"f"}, c);
        b.f = read_node_table(doc["dynamics"].contains("f") ? doc["dynamics"]["f"] : json(), "dynamics.f",
                              horizon, names, c);
    }
    if (!doc.contains("costs") || !doc["costs"].is_object()) {
        c.add("costs", "missing or not an object");
        b.g = Table(horizon + 1, std::vector<double>(names.size(), 0.0));
        b.d = Table(horizon, std::vector<double>(names.size(), 0.0));
        b.a = Table(horizon, std::vector<double>(names.size(), 0.0));
        return b;
    }
    const json& costs = doc["costs"];
    check_keys(costs, "costs", {"g", "d", "a"}, c);
    b.g = read_node_table(costs.contains("g") ? costs["g"] : json(), "costs.g", horizon + 1, names, c);
    b.d = read_node_table(costs.contains("d") ? costs["d"] : json(), "costs.d", horizon, names, c);
    b.a = read_node_table(costs.contains("a") ? costs["a"] : json(), "costs.a", horizon, names, c);
    return b;
}

// ---- general-model grid blocks ----------------------------------------

std::vector<double> read_grid(const json& doc, Collector& c) {
    std::vector<double> grid;
    if (!doc.contains("state_grid") || !doc["state_grid"].is_array() || doc["state_grid"].empty()) {
        c.add("state_grid", "expected a non-empty array of grid points");
        return grid;
    }
    const json& j = doc["state_grid"];
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            c.add("state_grid[" + std::to_string(i) + "]", std::string("expected a number, got ") + type_name(j[i]));
            grid.push_back(0.0);
            continue;
        }
        grid.push_back(j[i].get<double>());
    }
    return grid;
}

int nearest_index(const std::vector<double>& grid, double x) {
    auto it = std::lower_bound(grid.begin(), grid.end(), x);
    if (it == grid.begin()) return 0;
    if (it == grid.end()) return (int)grid.size() - 1;
    int hi = (int)(it - grid.begin());
    return (x - grid[hi - 1] <= grid[hi] - x) ? hi - 1 : hi;
}

std::vector<int> read_index_map(const json& j, const std::string& path, int grid_size, Collector& c) {
    std::vector<int> map(grid_size, 0);
    if (!j.is_array() || (int)j.size() != grid_size) {
        c.add(path, "expected an array of " + std::to_string(grid_size) + " grid indices");
        return map;
    }
    for (int x = 0; x < grid_size; ++x) {
        if (!j[x].is_number_integer()) {
            c.add(path + "[" + std::to_string(x) + "]", std::string("expected a grid index, got ") + type_name(j[x]));
            continue;
        }
        long v = j[x].get<long>();
        if (v < 0 || v >= grid_size) {
            c.add(path + "[" + std::to_string(x) + "]",
                  "grid index " + std::to_string(v) + " outside 0.." + std::to_string(grid_size - 1));
            continue;
        }
        map[x] = (int)v;
    }
    return map;
}

std::vector<std::vector<std::vector<int>>> read_grid_dynamics(const json& doc, int horizon,
                                                              const std::vector<std::string>& names,
                                                              const std::vector<double>& grid,
                                                              Collector& c) {
    const int nodes = (int)names.size();
    const int n = (int)grid.size();
    std::vector<std::vector<std::vector<int>>> dyn(
        horizon, std::vector<std::vector<int>>(nodes, std::vector<int>(n, 0)));
    if (!doc.contains("grid_dynamics") || !doc["grid_dynamics"].is_object()) {
        c.add("grid_dynamics", "missing or not an object keyed by node name");
        return dyn;
    }
    const json& j = doc["grid_dynamics"];
    std::vector<bool> seen(names.size(), false);
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto found = std::find(names.begin(), names.end(), it.key());
        const std::string p = "grid_dynamics." + it.key();
        if (found == names.end()) {
            c.add(p, "unknown node");
            continue;
        }
        const int v = (int)(found - names.begin());
        seen[v] = true;
        const json& cell = it.value();
        if (!cell.is_object()) {
            c.add(p, "expected an object with one of \"map\", \"maps\", \"factor\"");
            continue;
        }
        check_keys(cell, p, {"map", "maps", "factor"}, c);
        int kinds = (int)cell.contains("map") + (int)cell.contains("maps") + (int)cell.contains("factor");
        if (kinds != 1) {
            c.add(p, "expected exactly one of \"map\", \"maps\", \"factor\"");
            continue;
        }
        if (cell.contains("map")) {
            std::vector<int> m = read_index_map(cell["map"], p + ".map", n, c);
            for (int t = 0; t < horizon; ++t) dyn[t][v] = m;
        } else if (cell.contains("maps")) {
            const json& maps = cell["maps"];
            if (!maps.is_array() || (int)maps.size() != horizon) {
                c.add(p + ".maps", "expected " + std::to_string(horizon) + " per-stage maps");
                continue;
            }
            for (int t = 0; t < horizon; ++t)
                dyn[t][v] = read_index_map(maps[t], p + ".maps[" + std::to_string(t) + "]", n, c);
        } else {
            if (!cell["factor"].is_number()) {
                c.add(p + ".factor", std::string("expected a number, got ") + type_name(cell["factor"]));
                continue;
            }
            double f = cell["factor"].get<double>();
            if (!std::isfinite(f)) {
                c.add(p + ".factor", "must be finite");
                continue;
            }
            // Multiplying by f is realized by snapping to the nearest point.
            std::vector<int> m(n, 0);
            for (int x = 0; x < n; ++x) m[x] = nearest_index(grid, f * grid[x]);
            for (int t = 0; t < horizon; ++t) dyn[t][v] = m;
        }
    }
    for (size_t v = 0; v < names.size(); ++v)
        if (!seen[v]) c.add("grid_dynamics", "missing entry for node \"" + names[v] + "\"");
    return dyn;
}

std::vector<std::vector<std::vector<double>>> read_grid_cost(const json& j, const std::string& path,
                                                             int rows, const std::vector<std::string>& names,
                                                             int grid_size, Collector& c) {
    const int nodes = (int)names.size();
    std::vector<std::vector<std::vector<double>>> out(
        rows, std::vector<std::vector<double>>(nodes, std::vector<double>(grid_size, 0.0)));
    if (j.is_null()) {
        c.add(path, "missing");
        return out;
    }
    if (!j.is_object()) {
        c.add(path, std::string("expected an object keyed by node name, got ") + type_name(j));
        return out;
    }
    std::vector<bool> seen(names.size(), false);
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto found = std::find(names.begin(), names.end(), it.key());
        const std::string p = path + "." + it.key();
        if (found == names.end()) {
            c.add(p, "unknown node");
            continue;
        }
        const int v = (int)(found - names.begin());
        seen[v] = true;
        const json& cell = it.value();
        if (!cell.is_array() || cell.empty()) {
            c.add(p, "expected a per-grid array or a per-stage array of per-grid arrays");
            continue;
        }
        if (cell[0].is_array()) {
            if ((int)cell.size() != rows) {
                c.add(p, "expected " + std::to_string(rows) + " stage rows, got " + std::to_string(cell.size()));
                continue;
            }
            for (int t = 0; t < rows; ++t) {
                const std::string pt = p + "[" + std::to_string(t) + "]";
                if (!cell[t].is_array() || (int)cell[t].size() != grid_size) {
                    c.add(pt, "expected " + std::to_string(grid_size) + " grid entries");
                    continue;
                }
                for (int x = 0; x < grid_size; ++x) {
                    if (!cell[t][x].is_number()) {
                        c.add(pt + "[" + std::to_string(x) + "]",
                              std::string("expected a number, got ") + type_name(cell[t][x]));
                        continue;
                    }
                    out[t][v][x] = cell[t][x].get<double>();
                }
            }
        } else {
            if ((int)cell.size() != grid_size) {
                c.add(p, "expected " + std::to_string(grid_size) + " grid entries, got " +
                             std::to_string(cell.size()));
                continue;
            }
            std::vector<double> row(grid_size, 0.0);
            for (int x = 0; x < grid_size; ++x) {
                if (!cell[x].is_number()) {
                    c.add(p + "[" + std::to_string(x) + "]",
                          std::string("expected a number, got ") + type_name(cell[x]));
                    continue;
                }
                row[x] = cell[x].get<double>();
            }
            for (int t = 0; t < rows; ++t) out[t][v] = row;
        }
    }
    for (size_t v = 0; v < names.size(); ++v)
        if (!seen[v]) c.add(path, "missing entry for node \"" + names[v] + "\"");
    return out;
}

// ---- dual-deter chain block --------------------------------------------

Chain read_chain(const json& doc, Collector& c, std::vector<std::string>& names_out) {
    long length = req_int(doc, "", "chain_length", 1, 1000000, c);
    if (!c.ok()) return Chain{};

    std::vector<int> down((size_t)length + 1, 0), up((size_t)length + 1, 0);
    for (long v = 1; v < length; ++v) {
        down[(size_t)v] = (int)v - 1;
        up[(size_t)v] = (int)v + 1;
    }
    if (doc.contains("interior_targets")) {
        const json& it = doc["interior_targets"];
        if (!it.is_object()) {
            c.add("interior_targets", "expected an object with \"down\" and/or \"up\" maps");
        } else {
            check_keys(it, "interior_targets", {"down", "up"}, c);
            auto read_side = [&](const char* key, std::vector<int>& slot) {
                if (!it.contains(key)) return;
                if (!it[key].is_object()) {
                    c.add(std::string("interior_targets.") + key, "expected an object keyed by interior node index");
                    return;
                }
                for (auto e = it[key].begin(); e != it[key].end(); ++e) {
                    const std::string p = std::string("interior_targets.") + key + "." + e.key();
                    long node = -1;
                    try {
                        size_t used = 0;
                        node = std::stol(e.key(), &used);
                        if (used != e.key().size()) node = -1;
                    } catch (...) {
                        node = -1;
                    }
                    if (node < 1 || node >= length) {
                        c.add(p, "key must be an interior node index (1.." + std::to_string(length - 1) + ")");
                        continue;
                    }
                    if (!e.value().is_number_integer()) {
                        c.add(p, std::string("expected a node index, got ") + type_name(e.value()));
                        continue;
                    }
                    slot[(size_t)node] = (int)e.value().get<long>();
                }
            };
            read_side("down", down);
            read_side("up", up);
        }
    }

    names_out.clear();
    if (doc.contains("node_names")) {
        const json& nn = doc["node_names"];
        if (!nn.is_array() || (long)nn.size() != length + 1) {
            c.add("node_names", "expected " + std::to_string(length + 1) + " names");
        } else {
            for (size_t i = 0; i < nn.size(); ++i) {
                if (!nn[i].is_string() || nn[i].get<std::string>().empty()) {
                    c.add("node_names[" + std::to_string(i) + "]", "expected a non-empty string");
                    names_out.push_back(std::to_string(i));
                } else {
                    names_out.push_back(nn[i].get<std::string>());
                }
            }
        }
    }
    if (names_out.empty())
        for (long i = 0; i <= length; ++i) names_out.push_back(std::to_string(i));

    if (!c.ok()) return Chain{};
    try {
        return make_chain((int)length, std::move(down), std::move(up));
    } catch (const SpecError& e) {
        c.issues.insert(c.issues.end(), e.issues.begin(), e.issues.end());
        return Chain{};
    }
}

// ---- serialization helpers ----------------------------------------------

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if ((unsigned char)ch < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += "\"";
    return out;
}

void append_doubles(std::string& s, const std::vector<double>& v) {
    s += "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt(v[i]);
    }
    s += "]";
}

template <typename Row>
void append_nested(std::string& s, const std::vector<Row>& rows) {
    s += "[";
    for (size_t i = 0; i < rows.size(); ++i) {
        if (i) s += ",";
        if constexpr (std::is_same_v<Row, std::vector<double>>)
            append_doubles(s, rows[i]);
        else
            append_nested(s, rows[i]);
    }
    s += "]";
}

bool is_chain_end(const ResultBundle& b, int node) {
    return b.model == ModelKind::dual_deter && (node == 0 || node + 1 == (int)b.node_names.size());
}

std::string action_label(const ResultBundle& b, int node, const StageAction& sa) {
    if (sa.cost_node >= 0 && is_chain_end(b, node)) return "tau";
    return b.node_names[sa.target];
}

}  // namespace

const char* to_string(ModelKind m) {
    switch (m) {
        case ModelKind::scalar_lq: return "scalar_lq";
        case ModelKind::dual_deter: return "dual_deter";
        case ModelKind::general: return "general";
    }
    return "unknown";
}

SpecDocument parse_spec_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("document: not valid JSON (") + e.what() + ")");
    }
    if (!doc.is_object()) throw SpecError("document: expected a JSON object");

    Collector c;
    SpecDocument out;
    out.hash = fnv1a64(text);

    std::string model;
    if (!doc.contains("model") || !doc["model"].is_string()) {
        c.add("model", "missing or not a string; expected one of scalar_lq, dual_deter, general");
    } else {
        model = doc["model"].get<std::string>();
        if (model != "scalar_lq" && model != "dual_deter" && model != "general")
            c.add("model", "unknown model \"" + model + "\"; expected one of scalar_lq, dual_deter, general");
    }
    c.throw_if_any();

    out.title = opt_string(doc, "title", c);
    out.notes = opt_string(doc, "notes", c);
    out.horizon = (int)req_int(doc, "", "horizon", 1, 100000, c);
    c.throw_if_any();

    if (model == "scalar_lq") {
        out.model = ModelKind::scalar_lq;
        check_keys(doc, "", {"model", "title", "notes", "horizon", "nodes", "edges", "dynamics", "costs"}, c);
        out.node_names = read_node_names(doc, c);
        auto edges = read_edges(doc, out.node_names, c);
        CostBlocks b = read_cost_blocks(doc, out.horizon, out.node_names, c);
        c.throw_if_any();
        try {
            out.scalar.graph = make_graph((int)out.node_names.size(), edges);
        } catch (const SpecError& e) {
            c.issues.insert(c.issues.end(), e.issues.begin(), e.issues.end());
        }
        c.throw_if_any();
        out.scalar.horizon = out.horizon;
        out.scalar.f = std::move(b.f);
        out.scalar.g = std::move(b.g);
        out.scalar.d = std::move(b.d);
        out.scalar.a = std::move(b.a);
        validate(lower(out.scalar));  // finiteness + nonnegativity, path-tagged
    } else if (model == "dual_deter") {
        out.model = ModelKind::dual_deter;
        check_keys(doc, "",
                   {"model", "title", "notes", "horizon", "chain_length", "interior_targets", "node_names",
                    "dynamics", "costs"},
                   c);
        out.chain.chain = read_chain(doc, c, out.node_names);
        if (out.node_names.empty()) c.throw_if_any();  // no usable chain: stop before key noise
        CostBlocks b = read_cost_blocks(doc, out.horizon, out.node_names, c);
        c.throw_if_any();
        out.chain.horizon = out.horizon;
        out.chain.f = std::move(b.f);
        out.chain.g = std::move(b.g);
        out.chain.d = std::move(b.d);
        out.chain.a = std::move(b.a);
        validate(lower(out.chain));
    } else {
        out.model = ModelKind::general;
        check_keys(doc, "",
                   {"model", "title", "notes", "horizon", "nodes", "edges", "state_grid", "grid_dynamics",
                    "grid_costs"},
                   c);
        out.node_names = read_node_names(doc, c);
        auto edges = read_edges(doc, out.node_names, c);
        std::vector<double> grid = read_grid(doc, c);
        c.throw_if_any();
        out.grid.dynamics = read_grid_dynamics(doc, out.horizon, out.node_names, grid, c);
        if (!doc.contains("grid_costs") || !doc["grid_costs"].is_object()) {
            c.add("grid_costs", "missing or not an object");
        } else {
            check_keys(doc["grid_costs"], "grid_costs", {"g", "d", "a"}, c);
            const json& gc = doc["grid_costs"];
            out.grid.g = read_grid_cost(gc.contains("g") ? gc["g"] : json(), "grid_costs.g", out.horizon + 1,
                                        out.node_names, (int)grid.size(), c);
            out.grid.d = read_grid_cost(gc.contains("d") ? gc["d"] : json(), "grid_costs.d", out.horizon,
                                        out.node_names, (int)grid.size(), c);
            out.grid.a = read_grid_cost(gc.contains("a") ? gc["a"] : json(), "grid_costs.a", out.horizon,
                                        out.node_names, (int)grid.size(), c);
        }
        c.throw_if_any();
        try {
            out.grid.graph = make_graph((int)out.node_names.size(), edges);
        } catch (const SpecError& e) {
            c.issues.insert(c.issues.end(), e.issues.begin(), e.issues.end());
        }
        c.throw_if_any();
        out.grid.horizon = out.horizon;
        out.grid.grid = std::move(grid);
        validate(out.grid);
    }
    return out;
}

SpecDocument load_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError(path + ": cannot read file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec_text(ss.str());
}

ResultBundle solve_document(const SpecDocument& doc, RunMode mode) {
    ResultBundle b;
    b.solver_version = kVersion;
    char hex[32];
    std::snprintf(hex, sizeof hex, "fnv1a64:%016llx", (unsigned long long)doc.hash);
    b.spec_hash = hex;
    b.model = doc.model;
    b.horizon = doc.horizon;
    b.node_names = doc.node_names;

    switch (doc.model) {
        case ModelKind::scalar_lq: {
            ScalarProblem prob = lower(doc.scalar);
            b.scalar = solve_lp(prob);
            b.form = std::move(prob.form);
            break;
        }
        case ModelKind::dual_deter: {
            ChainSolveResult r = solve_closed_form(doc.chain);
            b.scalar = std::move(r.table);
            b.branches = std::move(r.records);
            b.form = game_form(doc.chain.chain);
            break;
        }
        case ModelKind::general: {
            b.grid = solve(doc.grid, mode);
            b.grid_points = doc.grid.grid;
            b.form = game_form(doc.grid.graph);
            break;
        }
    }
    return b;
}

std::string emit_json(const ResultBundle& b) {
    const bool is_grid = b.model == ModelKind::general;
    std::string s = "{\n";
    s += "  \"solver_version\": " + quote(b.solver_version) + ",\n";
    s += "  \"spec_hash\": " + quote(b.spec_hash) + ",\n";
    s += "  \"model\": " + quote(to_string(b.model)) + ",\n";
    s += "  \"horizon\": " + std::to_string(b.horizon) + ",\n";

    s += "  \"nodes\": [";
    for (size_t i = 0; i < b.node_names.size(); ++i) {
        if (i) s += ",";
        s += quote(b.node_names[i]);
    }
    s += "],\n";

    s += "  \"actions\": {";
    for (int v = 0; v < b.form.node_count(); ++v) {
        if (v) s += ",";
        s += quote(b.node_names[v]) + ":{\"defender\":[";
        for (size_t i = 0; i < b.form.nodes[v].defender.size(); ++i) {
            if (i) s += ",";
            s += quote(action_label(b, v, b.form.nodes[v].defender[i]));
        }
        s += "],\"adversary\":[";
        for (size_t i = 0; i < b.form.nodes[v].adversary.size(); ++i) {
            if (i) s += ",";
            s += quote(action_label(b, v, b.form.nodes[v].adversary[i]));
        }
        s += "]}";
    }
    s += "},\n";

    if (!is_grid) {
        s += "  \"coefficients\": ";
        append_nested(s, b.scalar.p);
        s += ",\n";
    }
    if (b.model == ModelKind::dual_deter) {
        s += "  \"branches\": [";
        for (size_t i = 0; i < b.branches.size(); ++i) {
            const BranchRecord& r = b.branches[i];
            if (i) s += ",";
            s += "{\"k\":" + std::to_string(r.stage + 1) + ",\"node\":" + quote(b.node_names[r.node]) +
                 ",\"branch\":" + quote(to_string(r.branch)) + ",\"closed_value\":" + fmt(r.closed_value) +
                 ",\"lp_value\":" + fmt(r.lp_value) + ",\"agreed\":" + (r.agreed ? "true" : "false") +
                 ",\"used_lp\":" + (r.used_lp ? "true" : "false") + "}";
        }
        s += "],\n";
    }
    if (is_grid) {
        s += "  \"grid\": ";
        append_doubles(s, b.grid_points);
        s += ",\n";
        s += "  \"values\": ";
        append_nested(s, b.grid.value);
        s += ",\n";
        s += "  \"policy_defender\": ";
        append_nested(s, b.grid.policy_defender);
        s += ",\n";
        s += "  \"policy_adversary\": ";
        append_nested(s, b.grid.policy_adversary);
    } else {
        s += "  \"policy_defender\": ";
        append_nested(s, b.scalar.policy_defender);
        s += ",\n";
        s += "  \"policy_adversary\": ";
        append_nested(s, b.scalar.policy_adversary);
    }

    if (b.simulation.present) {
        const SimulationSummary& sim = b.simulation;
        s += ",\n  \"simulation\": {\"x1\":" + fmt(sim.x1) + ",\"start_node\":" + quote(b.node_names[sim.start_node]) +
             ",\"samples\":" + std::to_string(sim.samples) + ",\"seed\":" + std::to_string(sim.seed) +
             ",\"mean\":" + fmt(sim.estimate.mean) + ",\"std_error\":" + fmt(sim.estimate.std_error) +
             ",\"degenerate\":" + (sim.estimate.degenerate ? "true" : "false") +
             ",\"solver_value\":" + fmt(sim.solver_value) + "}";
    }
    s += "\n}\n";
    return s;
}

std::string emit_values_csv(const ResultBundle& b) {
    std::string s;
    if (b.model == ModelKind::general) {
        s = "k,node,x,value\n";
        for (size_t t = 0; t < b.grid.value.size(); ++t)
            for (size_t v = 0; v < b.grid.value[t].size(); ++v)
                for (size_t x = 0; x < b.grid.value[t][v].size(); ++x)
                    s += std::to_string(t + 1) + "," + b.node_names[v] + "," + fmt(b.grid_points[x]) + "," +
                         fmt(b.grid.value[t][v][x]) + "\n";
        return s;
    }
    s = "k,node,coefficient\n";
    for (size_t t = 0; t < b.scalar.p.size(); ++t)
        for (size_t v = 0; v < b.scalar.p[t].size(); ++v)
            s += std::to_string(t + 1) + "," + b.node_names[v] + "," + fmt(b.scalar.p[t][v]) + "\n";
    return s;
}

std::string emit_policy_csv(const ResultBundle& b, Side side) {
    std::string s;
    if (b.model == ModelKind::general) {
        const auto& pol = side == Side::defender ? b.grid.policy_defender : b.grid.policy_adversary;
        s = "k,node,x,target,probability\n";
        for (size_t t = 0; t < pol.size(); ++t)
            for (size_t v = 0; v < pol[t].size(); ++v) {
                const auto& options =
                    side == Side::defender ? b.form.nodes[v].defender : b.form.nodes[v].adversary;
                for (size_t x = 0; x < pol[t][v].size(); ++x)
                    for (size_t i = 0; i < pol[t][v][x].size(); ++i)
                        s += std::to_string(t + 1) + "," + b.node_names[v] + "," + fmt(b.grid_points[x]) + "," +
                             action_label(b, (int)v, options[i]) + "," + fmt(pol[t][v][x][i]) + "\n";
            }
        return s;
    }
    const auto& pol = side == Side::defender ? b.scalar.policy_defender : b.scalar.policy_adversary;
    s = "k,node,target,probability\n";
    for (size_t t = 0; t < pol.size(); ++t)
        for (size_t v = 0; v < pol[t].size(); ++v) {
            const auto& options = side == Side::defender ? b.form.nodes[v].defender : b.form.nodes[v].adversary;
            for (size_t i = 0; i < pol[t][v].size(); ++i)
                s += std::to_string(t + 1) + "," + b.node_names[v] + "," + action_label(b, (int)v, options[i]) +
                     "," + fmt(pol[t][v][i]) + "\n";
        }
    return s;
}

std::vector<std::string> bundled_example_names() { return {"sird", "stock-market"}; }

const std::string& bundled_example_json(const std::string& name) {
    if (name == "sird") return kSirdJson;
    if (name == "stock-market") return kStockMarketJson;
    throw SpecError("unknown bundled example \"" + name + "\"; available: sird, stock-market");
}

}  // namespace takeover
