#include "codazzi/chart.hpp"

#include <cmath>
#include <sstream>

namespace codazzi {

void Chart::validate() const {
    if (coords.size() < 2) throw ConfigError("chart must have dimension >= 2");
    if (domain.size() != coords.size() || periodic.size() != coords.size())
        throw ConfigError("chart fields must all have the same length");
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (!(domain[i].lo < domain[i].hi))
            throw ConfigError("chart axis '" + coords[i] + "' has an empty interval");
    }
}

bool Chart::contains(const Point& p) const {
    for (int i = 0; i < dim(); ++i) {
        if (periodic[i]) continue;
        if (p[i] < domain[i].lo || p[i] > domain[i].hi) return false;
    }
    return true;
}

Point Chart::wrap(Point p) const {
    for (int i = 0; i < dim(); ++i) {
        if (!periodic[i]) continue;
        const double len = domain[i].length();
        p[i] = domain[i].lo + std::fmod(std::fmod(p[i] - domain[i].lo, len) + len, len);
    }
    return p;
}

std::string Chart::describe_point(const Point& p) const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < dim(); ++i) {
        if (i) os << ", ";
        os << coords[i] << '=' << p[i];
    }
    os << ')';
    return os.str();
}

Chart make_chart_txy(Interval t, Interval x, Interval y, bool periodic_all) {
    Chart c;
    c.coords = {"t", "x", "y"};
    c.domain = {t, x, y};
    c.periodic = {periodic_all, periodic_all, periodic_all};
    return c;
}

Grid::Grid(const Chart& chart, const GridSpec& spec) {
    chart.validate();
    const int n = chart.dim();
    if (static_cast<int>(spec.counts.size()) != n)
        throw ConfigError("grid spec dimension does not match chart");
    counts_ = spec.counts;
    periodic_.assign(chart.periodic.begin(), chart.periodic.end());
    origin_.resize(n);
    spacing_.resize(n);
    for (int i = 0; i < n; ++i) {
        if (counts_[i] < 2) throw GridTooCoarse("grid needs at least 2 nodes per axis");
        double lo = chart.domain[i].lo;
        double hi = chart.domain[i].hi;
        if (!periodic_[i]) {
            lo += spec.margin;
            hi -= spec.margin;
            if (!(lo < hi)) throw ConfigError("interior margin exhausts the axis interval");
            spacing_[i] = (hi - lo) / (counts_[i] - 1);
        } else {
            spacing_[i] = (hi - lo) / counts_[i];
        }
        origin_[i] = lo;
    }
    stride_.resize(n);
    total_ = 1;
    for (int i = n - 1; i >= 0; --i) {
        stride_[i] = total_;
        total_ *= counts_[i];
    }
}

Point Grid::point(int flat_index) const {
    const int n = dim();
    Point p(n);
    for (int i = 0; i < n; ++i) {
        const int idx = (flat_index / stride_[i]) % counts_[i];
        p[i] = axis_value(i, idx);
    }
    return p;
}

std::vector<int> Grid::multi_index(int flat_index) const {
    std::vector<int> mi(dim());
    for (int i = 0; i < dim(); ++i) mi[i] = (flat_index / stride_[i]) % counts_[i];
    return mi;
}

int Grid::flat_index(const std::vector<int>& mi) const {
    int f = 0;
    for (int i = 0; i < dim(); ++i) f += mi[i] * stride_[i];
    return f;
}

int Grid::nearest_node(const Point& p) const {
    std::vector<int> mi(dim());
    for (int i = 0; i < dim(); ++i) {
        double rel = (p[i] - origin_[i]) / spacing_[i];
        int idx = static_cast<int>(std::lround(rel));
        if (periodic_[i]) {
            idx = ((idx % counts_[i]) + counts_[i]) % counts_[i];
        } else {
            idx = std::max(0, std::min(counts_[i] - 1, idx));
        }
        mi[i] = idx;
    }
    return flat_index(mi);
}

int Grid::neighbor(int flat_index, int axis, int delta) const {
    const int idx = (flat_index / stride_[axis]) % counts_[axis];
    int nidx = idx + delta;
    if (periodic_[axis]) {
        nidx = ((nidx % counts_[axis]) + counts_[axis]) % counts_[axis];
    } else if (nidx < 0 || nidx >= counts_[axis]) {
        return -1;
    }
    return flat_index + (nidx - idx) * stride_[axis];
}

bool Grid::is_interior(int flat_index) const {
    for (int i = 0; i < dim(); ++i) {
        if (periodic_[i]) continue;
        const int idx = (flat_index / stride_[i]) % counts_[i];
        if (idx == 0 || idx == counts_[i] - 1) return false;
    }
    return true;
}

double Grid::box_diameter() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
        const double len = spacing_[i] * (periodic_[i] ? counts_[i] : counts_[i] - 1);
        s += len * len;
    }
    return std::sqrt(s);
}

} // namespace codazzi
