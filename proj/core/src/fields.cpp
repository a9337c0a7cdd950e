#include "codazzi/fields.hpp"

#include <Eigen/Cholesky>

namespace codazzi {

SymTensorField::SymTensorField(Chart chart, std::vector<ScalarExpr> upper_entries)
    : chart_(std::move(chart)), entries_(std::move(upper_entries)) {
    const int n = chart_.dim();
    if (static_cast<int>(entries_.size()) != n * (n + 1) / 2)
        throw ConfigError("tensor needs n(n+1)/2 packed upper-triangular entries");
}

SymTensorField SymTensorField::zero(const Chart& chart) {
    const int n = chart.dim();
    std::vector<ScalarExpr> e(static_cast<std::size_t>(n * (n + 1) / 2), ScalarExpr(n));
    return SymTensorField(chart, std::move(e));
}

void SymTensorField::set_entry(int i, int j, ScalarExpr e) {
    entries_[Jet2::packed_index(i, j, dim())] = std::move(e);
}

Eigen::MatrixXd SymTensorField::value_at(const Point& p) const {
    const int n = dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = entry(i, j).value_at(p);
    return m;
}

std::vector<Jet2> SymTensorField::jets_at(const Point& p) const {
    std::vector<Jet2> jets;
    jets.reserve(entries_.size());
    for (const auto& e : entries_) jets.push_back(e.jet_at(p));
    return jets;
}

Eigen::MatrixXd SymTensorField::derivative_matrix(const std::vector<Jet2>& jets, int axis,
                                                  int dim) {
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            m(i, j) = m(j, i) = jets[Jet2::packed_index(i, j, dim)].grad[axis];
    return m;
}

Eigen::MatrixXd SymTensorField::value_matrix(const std::vector<Jet2>& jets, int dim) {
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) m(i, j) = m(j, i) = jets[Jet2::packed_index(i, j, dim)].value;
    return m;
}

MetricField MetricField::euclidean(const Chart& chart) {
    SymTensorField t = SymTensorField::zero(chart);
    for (int i = 0; i < chart.dim(); ++i) t.set_entry(i, i, ScalarExpr::constant(1.0, chart.dim()));
    return MetricField(std::move(t));
}

Eigen::MatrixXd MetricField::value_at(const Point& p) const {
    Eigen::MatrixXd g = tensor_.value_at(p);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw DegenerateMetric(chart().describe_point(p));
    return g;
}

Eigen::MatrixXd MetricField::inverse_at(const Point& p) const {
    Eigen::MatrixXd g = tensor_.value_at(p);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw DegenerateMetric(chart().describe_point(p));
    return llt.solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
}

bool MetricField::is_spd_at(const Point& p) const {
    Eigen::LLT<Eigen::MatrixXd> llt(tensor_.value_at(p));
    return llt.info() == Eigen::Success;
}

} // namespace codazzi
