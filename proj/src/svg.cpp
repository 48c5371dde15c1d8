#include <algorithm>
#include <cstdio>
#include <sstream>

#include "tropic/io.hpp"
#include "tropic/simplex.hpp"

namespace tropic::io {

namespace {

struct Stroke {
    QVec from, to;
    Integer weight;
    bool open_end = false;  // `to` is a clipping point, not a vertex
};

struct Drawing {
    std::vector<Stroke> strokes;
    std::vector<QVec> vertices;
};

std::string number(const Rational& q) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", q.get_d());
    return buf;
}

std::string render(const Drawing& d) {
    constexpr int kScale = 40;
    constexpr int kMargin = 30;
    std::vector<QVec> points = d.vertices;
    for (const auto& s : d.strokes) {
        points.push_back(s.from);
        points.push_back(s.to);
    }
    if (points.empty()) points.push_back(qvec({0, 0}));
    Rational xmin = points[0][0], xmax = xmin, ymin = points[0][1], ymax = ymin;
    for (const auto& p : points) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    }
    // Page coordinates: x to the right, y flipped so that q2 points up.
    auto px = [&](const QVec& p) { return number(kMargin + kScale * (p[0] - xmin)); };
    auto py = [&](const QVec& p) { return number(kMargin + kScale * (ymax - p[1])); };
    Rational width = 2 * kMargin + kScale * (xmax - xmin), height = 2 * kMargin + kScale * (ymax - ymin);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << number(width) << "\" height=\"" << number(height)
       << "\" viewBox=\"0 0 " << number(width) << " " << number(height) << "\">\n";
    os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& s : d.strokes) {
        os << "  <line x1=\"" << px(s.from) << "\" y1=\"" << py(s.from) << "\" x2=\"" << px(s.to) << "\" y2=\"" << py(s.to)
           << "\" stroke=\"black\" stroke-width=\"2\"" << (s.open_end ? " class=\"ray\"" : " class=\"edge\"")
           << "/>\n";
    }
    for (const auto& s : d.strokes) {
        QVec mid = Rational(1, 2) * (s.from + s.to);
        os << "  <text x=\"" << px(mid) << "\" y=\"" << py(mid) << "\" dx=\"4\" dy=\"-4\" font-size=\"12\" fill=\"blue\">"
           << s.weight.get_str() << "</text>\n";
    }
    for (const auto& v : d.vertices)
        os << "  <circle cx=\"" << px(v) << "\" cy=\"" << py(v) << "\" r=\"3\" fill=\"red\"/>\n";
    os << "</svg>\n";
    return os.str();
}

void require_plane(std::size_t n) {
    if (n != 2) throw Error(Errc::InvalidInput, "SVG output needs ambient dimension 2, got " + std::to_string(n));
}

void add_vertex(Drawing& d, const QVec& v) {
    if (std::find(d.vertices.begin(), d.vertices.end(), v) == d.vertices.end()) d.vertices.push_back(v);
}

}  // namespace

std::string svg(const TropicalCurve& c, const Rational& clip_radius) {
    require_plane(c.ambient_dimension());
    Drawing d;
    d.vertices = c.vertices();
    for (const auto& e : c.edges()) d.strokes.push_back({c.vertices()[e.from], c.vertices()[e.to], e.weight, false});
    for (const auto& r : c.rays()) {
        const QVec& base = c.vertices()[r.vertex];
        d.strokes.push_back({base, base + clip_radius * to_rational(r.direction), r.weight, true});
    }
    return render(d);
}

std::string svg(const WeightedPolyhedralComplex& c, const Rational& clip_radius) {
    require_plane(c.ambient_dimension());
    Drawing d;
    for (const auto& cell : c.cells()) {
        if (cell.dimension == 0) {
            add_vertex(d, affine_hull(cell.polyhedron)->interior_point);
            continue;
        }
        if (cell.dimension != 1) throw Error(Errc::InvalidInput, "SVG output draws one-dimensional complexes only");
        ZVec dir = tangent_lattice(cell.polyhedron).basis().front();
        SimplexLP lp = cell.polyhedron.lp();
        LPResult lo = lp.minimize(to_rational(dir)), hi = lp.maximize(to_rational(dir));
        const bool has_lo = lo.status == LPStatus::Optimal, has_hi = hi.status == LPStatus::Optimal;
        const QVec step = clip_radius * to_rational(dir);
        if (has_lo && has_hi) {
            d.strokes.push_back({lo.point, hi.point, cell.weight, false});
            add_vertex(d, lo.point);
            add_vertex(d, hi.point);
        } else if (has_lo) {
            d.strokes.push_back({lo.point, lo.point + step, cell.weight, true});
            add_vertex(d, lo.point);
        } else if (has_hi) {
            d.strokes.push_back({hi.point, hi.point - step, cell.weight, true});
            add_vertex(d, hi.point);
        } else {
            QVec mid = affine_hull(cell.polyhedron)->interior_point;
            d.strokes.push_back({mid - step, mid + step, cell.weight, true});
        }
    }
    return render(d);
}

}  // namespace tropic::io
