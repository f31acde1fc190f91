#pragma once

#include "takeover/dual_deter.hpp"
#include "takeover/grid.hpp"
#include "takeover/scalar.hpp"
#include "takeover/sim.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace takeover {

enum class ModelKind { scalar_lq, dual_deter, general };

const char* to_string(ModelKind m);

/// A parsed spec file.  Exactly the member matching `model` is meaningful.
struct SpecDocument {
    ModelKind model = ModelKind::scalar_lq;
    std::string title;
    std::string notes;
    std::vector<std::string> node_names;
    int horizon = 0;

    ScalarSpec scalar;
    ChainSpec chain;
    GridSpec grid;

    uint64_t hash = 0;  // fnv1a64 of the raw document bytes
};

/// Parses and validates a JSON game spec.  Collects every violation (wrong
/// type, bad shape, negative cost, dangling node reference, off-grid map)
/// into one SpecError, each message prefixed with its document path.
SpecDocument parse_spec_text(const std::string& text);
SpecDocument load_spec_file(const std::string& path);

struct SimulationSummary {
    bool present = false;
    double x1 = 1.0;
    int start_node = 0;
    long samples = 0;
    uint64_t seed = 0;
    Estimate estimate;
    double solver_value = 0.0;
};

/// Everything a solve produced, ready for serialization.
struct ResultBundle {
    std::string solver_version;
    std::string spec_hash;  // "fnv1a64:<16 hex digits>"
    ModelKind model = ModelKind::scalar_lq;
    int horizon = 0;
    std::vector<std::string> node_names;
    GameForm form;  // labels the policy entries

    ScalarTable scalar;                // scalar_lq / dual_deter
    std::vector<BranchRecord> branches;  // dual_deter only
    GridTable grid;                    // general only
    std::vector<double> grid_points;

    SimulationSummary simulation;
};

ResultBundle solve_document(const SpecDocument& doc, RunMode mode = RunMode::parallel);

/// Deterministic serialization: fixed key order, every double printed with
/// 17 significant digits, no locale dependence.  Identical bundle, identical
/// bytes.
std::string emit_json(const ResultBundle& b);

/// values.csv: scalar models (k, node, coefficient); grid models
/// (k, node, x, value).  k is 1-based and includes the terminal row k = L+1.
std::string emit_values_csv(const ResultBundle& b);

/// policy CSV: scalar models (k, node, target, probability); grid models add
/// an x column.  Takeover options that stay in place are labeled "tau".
std::string emit_policy_csv(const ResultBundle& b, Side side);

/// Names accepted by bundled_example_json: {"sird", "stock-market"}.
std::vector<std::string> bundled_example_names();
const std::string& bundled_example_json(const std::string& name);

}  // namespace takeover
