#pragma once

// JSON schemas for every file format the library reads or writes. All
// formats carry a schema_version field.

#include <string>

#include "conic.hpp"
#include "incompat.hpp"
#include "moments.hpp"
#include "programs.hpp"
#include "quantum.hpp"
#include "scenario.hpp"

namespace amm {

inline constexpr int kSchemaVersion = 1;

// complex matrices serialize as nested arrays of [re, im] pairs
std::string to_json(const CMat& m);
CMat cmat_from_json(const std::string& text);

std::string to_json(const BellScenario& s);
BellScenario scenario_from_json(const std::string& text);

// {schema_version, scenario:{nx,ny,na,nb}, p[x][y][a][b]}
std::string to_json(const CorrelationTable& t);
CorrelationTable table_from_json(const std::string& text);

// {schema_version, scenario, beta[x][y][a][b], local_bound, name}
std::string to_json(const BellFunctional& f);
BellFunctional functional_from_json(const std::string& text);

// {schema_version, dims, states[a][x]} (matrices as [re,im] nests)
std::string to_json(const StateAssemblage& a);
StateAssemblage state_assemblage_from_json(const std::string& text);

// {schema_version, povms[x][a]}
std::string to_json(const MeasurementAssemblage& m);
MeasurementAssemblage measurement_assemblage_from_json(
    const std::string& text);

// {schema_version, quantity, value, level, status, gap, runtime_ms, ...}
std::string report_to_json(const RobustnessReport& r, double runtime_ms);

// moment layout dump: words as symbol lists plus the entry classification
std::string layout_to_json(const MomentLayout& layout);

// conic program dump for cross-checking with external solvers: block
// constants in packed lower-triangle arrays, variable coefficients as
// [block, row, col, value] quadruples
std::string program_to_json(const ConicProgram& p);

// digest of canonical input text, for report provenance
std::string digest(const std::string& text);

}  // namespace amm
