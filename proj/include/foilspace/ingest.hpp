#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "foilspace/types.hpp"

namespace foilspace {

/// Parses one airfoil coordinate file (Selig or Lednicer text format).
/// Detection rule: if the second nonempty line holds exactly two numeric
/// values, both > 1, it is read as Lednicer surface counts; otherwise the
/// file is Selig. Lednicer surfaces (both leading edge -> trailing edge) are
/// reordered into the Selig traversal; a shared leading-edge point is emitted
/// once. Coordinates are rescaled so the chord spans exactly [0, 1].
PolylineFoil parse_dat(const std::string& content);

/// parse_dat applied to a file on disk.
PolylineFoil read_dat(const std::string& path);

/// Writes the Selig text form: name line, then one "x y" row per point.
void write_dat(const PolylineFoil& pf, std::ostream& os, int precision = 17);
std::string write_dat_string(const PolylineFoil& pf, int precision = 17);

/// `count` copies of p with every component drawn uniformly from
/// [p_i (1-fraction), p_i (1+fraction)] and clamped to [0, 1].
/// Deterministic for a given seed.
std::vector<ParamVector> perturb_params(const ParamVector& p, int count,
                                        double fraction, uint64_t seed);

/// Dataset construction: for every base vector, the base foil plus five
/// perturbed variants (fraction 0.05), all generated and discretized at the
/// shared (scheme, n). Dataset size is 6 x base count.
FoilDataset build_dataset_d1(const std::vector<ParamVector>& bases,
                             Scheme scheme, int n, uint64_t seed);

/// Parses every coordinate file in a directory (sorted by filename) and
/// resamples each to the shared (scheme, n). Unreadable or malformed files
/// are skipped with a warning record; zero successful parses is an error.
/// An optional `manifest.json` in the directory ({"label": ..., "provenance":
/// ...}) sets the dataset label and member provenance.
FoilDataset load_external_dataset(const std::string& dir, Scheme scheme, int n);

/// Near-duplicate filter: drops any member whose pointwise maximum distance
/// to an earlier member is below the threshold (chord units). Returns the
/// number of dropped members; drops are logged into the dataset warnings.
int drop_near_duplicates(FoilDataset& ds, double threshold = 1e-4);

/// Canonical dataset file: CSV with one row per member
/// (name, provenance, x1, y1, ..., xN, yN at 17 significant digits) plus a
/// JSON manifest carrying n, scheme, label and warnings.
void write_dataset_csv(const FoilDataset& ds, const std::string& csv_path,
                       const std::string& manifest_path);
FoilDataset read_dataset_csv(const std::string& csv_path,
                             const std::string& manifest_path);

/// Reads base design vectors from a headerless CSV, 17 columns per row.
std::vector<ParamVector> read_params_csv(const std::string& path);

}  // namespace foilspace
