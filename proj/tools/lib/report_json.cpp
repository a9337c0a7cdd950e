#include "report_json.hpp"

#include <sstream>

#include <Eigen/Dense>

namespace codazzi::cli {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

Json point_to_json(const Point& p) {
    Json a = Json::array();
    for (int i = 0; i < p.size(); ++i) a.push_back(p[i]);
    return a;
}

} // namespace

Json residual_to_json(const ResidualReport& r) {
    Json j;
    j["name"] = r.name;
    j["grid"] = r.grid_counts;
    j["max"] = r.max_residual;
    j["mean"] = r.mean_residual;
    j["argmax"] = point_to_json(r.argmax);
    j["included"] = r.included_count;
    j["excluded"] = r.excluded_count;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    return j;
}

Json conditions_to_json(const CharConditions& c) {
    Json j;
    j["reports"] = Json::array();
    for (const auto& r : c.reports) j["reports"].push_back(residual_to_json(r));
    j["holds"] = {c.holds[0], c.holds[1], c.holds[2], c.holds[3]};
    j["agree"] = c.agree;
    j["all_true"] = c.all_true;
    j["vacuous"] = c.vacuous;
    return j;
}

const char* verdict_name(WarpVerdict::Kind k) {
    switch (k) {
        case WarpVerdict::Kind::WarpedCandidate: return "warped_candidate";
        case WarpVerdict::Kind::NoNontrivialSolution: return "no_nontrivial_solution";
        case WarpVerdict::Kind::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Json verdict_to_json(const WarpVerdict& v, const KernelBasis& basis, double grad_tol) {
    Json j;
    j["kernel_dim"] = v.kernel_dim;
    j["sigma_max"] = basis.sigma_max;
    Json tail = Json::array();
    for (int i = 0; i < basis.singular_tail.size(); ++i) tail.push_back(basis.singular_tail[i]);
    j["singular_tail"] = tail;
    j["contains_constant"] = basis.contains_constant;
    j["grad_tol"] = grad_tol;
    j["grad_norms_probe"] = v.grad_norms_probe;
    j["verdict"] = verdict_name(v.kind);
    if (v.kind == WarpVerdict::Kind::WarpedCandidate) {
        Json cert;
        cert["grad_norm"] = v.certificate_grad_norm;
        cert["system_residual"] = v.certificate_residual;
        j["certificate"] = cert;
    }
    return j;
}

Json warp_extract_to_json(const WarpExtract& w) {
    Json j;
    switch (w.status) {
        case WarpExtract::Status::Ok: j["status"] = "ok"; break;
        case WarpExtract::Status::NotWarpedEvidence: j["status"] = "not_warped_evidence"; break;
        case WarpExtract::Status::MisalignedFrame: j["status"] = "misaligned_frame"; break;
    }
    j["conditions"] = conditions_to_json(w.conditions);
    if (w.status == WarpExtract::Status::Ok) {
        j["eta_spatial"] = residual_to_json(w.eta_spatial);
        j["t"] = w.t_nodes;
        j["eta"] = w.eta_samples;
        j["q"] = w.q_samples;
        j["max_h_t_residual"] = w.max_h_t_residual;
    }
    return j;
}

Json poly_fit_summary(const Grid& grid, const Eigen::VectorXd& f_nodes,
                      const std::vector<std::string>& coords) {
    const int dim = grid.dim();
    std::vector<std::string> monomials = {"1"};
    for (int i = 0; i < dim; ++i) monomials.push_back(coords[i]);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) monomials.push_back(coords[i] + "*" + coords[j]);

    const int n_mono = static_cast<int>(monomials.size());
    Eigen::MatrixXd basis(grid.size(), n_mono);
    for (int k = 0; k < grid.size(); ++k) {
        const Point p = grid.point(k);
        int col = 0;
        basis(k, col++) = 1.0;
        for (int i = 0; i < dim; ++i) basis(k, col++) = p[i];
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) basis(k, col++) = p[i] * p[j];
    }
    const Eigen::VectorXd coeffs = basis.colPivHouseholderQr().solve(f_nodes);
    const double rms = std::sqrt((basis * coeffs - f_nodes).squaredNorm() / grid.size());

    Json j;
    j["monomials"] = monomials;
    Json cj = Json::array();
    for (int i = 0; i < coeffs.size(); ++i) cj.push_back(coeffs[i]);
    j["coefficients"] = cj;
    j["rms_misfit"] = rms;
    return j;
}

std::string nodes_to_csv(const Grid& grid, const std::vector<std::string>& coords,
                         const std::vector<std::pair<std::string, const Eigen::VectorXd*>>& cols) {
    std::ostringstream os;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) os << ',';
        os << coords[i];
    }
    for (const auto& [name, values] : cols) os << ',' << name;
    os << '\n';
    for (int k = 0; k < grid.size(); ++k) {
        const Point p = grid.point(k);
        for (int i = 0; i < p.size(); ++i) {
            if (i) os << ',';
            os << format_double(p[i]);
        }
        for (const auto& [name, values] : cols) os << ',' << format_double((*values)[k]);
        os << '\n';
    }
    return os.str();
}

} // namespace codazzi::cli
