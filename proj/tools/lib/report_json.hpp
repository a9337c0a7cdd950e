#pragma once

#include <json.hpp>

#include <codazzi/codazzi_checks.hpp>
#include <codazzi/kernel.hpp>
#include <codazzi/warp_classify.hpp>
#include <codazzi/warp_extract.hpp>

namespace codazzi::cli {

using Json = nlohmann::ordered_json;

Json residual_to_json(const ResidualReport& r);
Json conditions_to_json(const CharConditions& c);
Json verdict_to_json(const WarpVerdict& v, const KernelBasis& basis, double grad_tol);
Json warp_extract_to_json(const WarpExtract& w);

const char* verdict_name(WarpVerdict::Kind k);

/// Low-degree polynomial summary of a certificate's f nodes: least-squares
/// fit onto total-degree <= 2 monomials in the chart coordinates.
Json poly_fit_summary(const Grid& grid, const Eigen::VectorXd& f_nodes,
                      const std::vector<std::string>& coords);

/// CSV node table: coordinate columns then value columns, one row per node,
/// 17 significant digits for lossless round-trips.
std::string nodes_to_csv(const Grid& grid, const std::vector<std::string>& coords,
                         const std::vector<std::pair<std::string, const Eigen::VectorXd*>>& cols);

} // namespace codazzi::cli
