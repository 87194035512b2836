#pragma once

#include <string>
#include <vector>

#include "subfbm/simulate.hpp"
#include "subfbm/verify.hpp"

namespace subfbm {

// Ensembles are stored as a plain CSV (one row per path: the path's noise
// stream id followed by the n+1 grid values, full double precision, no
// header) plus a JSON metadata sidecar carrying everything needed to
// reproduce or validate the data: scheme, H, n, m, M, master_seed,
// distribution, matrix_checksum.
std::string ensemble_metadata_path(const std::string& csv_path);

void save_ensemble(const std::string& csv_path, const PathEnsemble& ensemble);
PathEnsemble load_ensemble(const std::string& csv_path);

std::string ensemble_metadata_json(const PathEnsemble& ensemble);

// Error-vs-resolution table for the convergence experiments; single header
// row, then one row per resolution.
void save_convergence_csv(const std::string& csv_path,
                          const std::vector<ConvergenceRow>& rows);

}  // namespace subfbm
