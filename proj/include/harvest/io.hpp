#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "harvest/dispersion.hpp"
#include "harvest/harvesting.hpp"
#include "harvest/quadrature.hpp"
#include "harvest/sweep.hpp"

namespace harvest::io {

std::string_view version();

/// 17 significant digits, so every double round-trips.
std::string format_double(double v);

std::string spectrum_csv(const dispersion::SpectrumReport& report);
nlohmann::json spectrum_json(const dispersion::SpectrumReport& report, const DimensionlessModel& model,
                             DispersionKind kind);

nlohmann::json spec_json(const quadrature::QuadratureSpec& spec);
nlohmann::json observables_json(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                                const HarvestObservables& obs);

/// Header: axis names, then p,c,x_re,x_im,concurrence,p_err,x_err,status.
std::string sweep_csv(const sweep::SweepResult& result);
nlohmann::json sweep_json(const sweep::SweepResult& result);

/// Writes to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace harvest::io
