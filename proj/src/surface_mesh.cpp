#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "capflow/surface.hpp"

namespace capflow::surface {

namespace {

double cot(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
    const double c = u.dot(v);
    const double s = u.cross(v).norm();
    return c / std::max(s, 1e-300);
}

std::string edge_str(int a, int b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

void TriangleMesh::validate() const {
    const int nv = static_cast<int>(vertices.size());
    if (nv < 4 || faces.size() < 4) throw MeshValidationError("mesh: too few vertices/faces");

    std::map<std::pair<int, int>, int> directed;  // directed edge -> count
    for (size_t f = 0; f < faces.size(); ++f) {
        const auto& tri = faces[f];
        for (int c = 0; c < 3; ++c) {
            const int a = tri[c], b = tri[(c + 1) % 3];
            if (a < 0 || a >= nv || b < 0 || b >= nv)
                throw MeshValidationError("mesh: face " + std::to_string(f) + " has out-of-range vertex index");
            if (a == b) throw MeshValidationError("mesh: face " + std::to_string(f) + " repeats a vertex");
            if (++directed[{a, b}] > 1)
                throw MeshValidationError("mesh: directed edge " + edge_str(a, b) +
                                          " used twice (non-manifold or inconsistently oriented)");
        }
        const Eigen::Vector3d e1 = vertices[tri[1]] - vertices[tri[0]];
        const Eigen::Vector3d e2 = vertices[tri[2]] - vertices[tri[0]];
        if (0.5 * e1.cross(e2).norm() <= 1e-14)
            throw MeshValidationError("mesh: face " + std::to_string(f) + " is degenerate");
    }
    for (const auto& [edge, count] : directed) {
        (void)count;
        if (directed.find({edge.second, edge.first}) == directed.end())
            throw MeshValidationError("mesh: edge " + edge_str(edge.first, edge.second) +
                                      " has no opposite half-edge (open or inconsistently oriented)");
    }
}

MeshVertexData compute_mesh_vertex_data(const TriangleMesh& mesh) {
    mesh.validate();
    const int nv = static_cast<int>(mesh.vertices.size());
    MeshVertexData d;
    d.vertex_area.assign(nv, 0.0);
    d.sigma1.assign(nv, 0.0);
    d.defect.assign(nv, 2.0 * M_PI);
    d.normal.assign(nv, Eigen::Vector3d::Zero());
    d.frame_e1.assign(nv, Eigen::Vector3d::Zero());
    d.frame_e2.assign(nv, Eigen::Vector3d::Zero());
    d.shape_frame.assign(nv, Eigen::Matrix2d::Zero());

    std::vector<Eigen::Vector3d> hvec(nv, Eigen::Vector3d::Zero());  // unscaled cotan sum
    std::vector<std::vector<int>> neighbors(nv);

    std::map<std::pair<int, int>, bool> seen_edge;
    for (const auto& tri : mesh.faces) {
        const Eigen::Vector3d& p0 = mesh.vertices[tri[0]];
        const Eigen::Vector3d& p1 = mesh.vertices[tri[1]];
        const Eigen::Vector3d& p2 = mesh.vertices[tri[2]];
        const Eigen::Vector3d fn = (p1 - p0).cross(p2 - p0);
        const double area2 = fn.norm();
        const double area = 0.5 * area2;
        d.total_area += area;

        const Eigen::Vector3d* p[3] = {&p0, &p1, &p2};
        double ang[3], ct[3];
        bool obtuse = false;
        int obtuse_at = -1;
        for (int c = 0; c < 3; ++c) {
            const Eigen::Vector3d u = *p[(c + 1) % 3] - *p[c];
            const Eigen::Vector3d v = *p[(c + 2) % 3] - *p[c];
            ang[c] = std::atan2(u.cross(v).norm(), u.dot(v));
            ct[c] = cot(u, v);
            if (ang[c] > 0.5 * M_PI) {
                obtuse = true;
                obtuse_at = c;
            }
        }
        for (int c = 0; c < 3; ++c) {
            const int i = tri[c];
            d.defect[i] -= ang[c];
            d.normal[i] += ang[c] * fn / std::max(area2, 1e-300);
            // mixed Voronoi area
            if (!obtuse) {
                const double l1 = (*p[(c + 1) % 3] - *p[c]).squaredNorm();
                const double l2 = (*p[(c + 2) % 3] - *p[c]).squaredNorm();
                d.vertex_area[i] += 0.125 * (l1 * ct[(c + 2) % 3] + l2 * ct[(c + 1) % 3]);
            } else {
                d.vertex_area[i] += (c == obtuse_at) ? 0.5 * area : 0.25 * area;
            }
            // cotan mean curvature: (cot alpha + cot beta)(x_i - x_j) across each edge
            const int cj = (c + 1) % 3, ck = (c + 2) % 3;
            const int j = tri[cj];
            hvec[i] += ct[ck] * (*p[c] - *p[cj]);  // edge (i,j), cot at the opposite corner
            hvec[i] += ct[cj] * (*p[c] - *p[ck]);  // edge (i,k), cot at the opposite corner
            if (!seen_edge[{std::min(i, j), std::max(i, j)}]) {
                seen_edge[{std::min(i, j), std::max(i, j)}] = true;
                neighbors[i].push_back(j);
                neighbors[j].push_back(i);
                ++d.edge_count;
            }
        }
    }

    for (int i = 0; i < nv; ++i) {
        d.normal[i].normalize();
        const Eigen::Vector3d h = hvec[i] / (2.0 * d.vertex_area[i]);
        d.sigma1[i] = h.norm() * (h.dot(d.normal[i]) >= 0.0 ? 1.0 : -1.0);
        const Eigen::Vector3d aux =
            std::fabs(d.normal[i].z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
        d.frame_e1[i] = aux.cross(d.normal[i]).normalized();
        d.frame_e2[i] = d.normal[i].cross(d.frame_e1[i]);
    }

    // Least-squares shape operator from normal differences, trace-corrected to
    // the cotangent mean curvature.
    for (int i = 0; i < nv; ++i) {
        Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
        Eigen::Vector3d atb = Eigen::Vector3d::Zero();
        for (int j : neighbors[i]) {
            const Eigen::Vector3d dx = mesh.vertices[j] - mesh.vertices[i];
            const Eigen::Vector3d dn = d.normal[j] - d.normal[i];
            const Eigen::Vector2d u(d.frame_e1[i].dot(dx), d.frame_e2[i].dot(dx));
            const Eigen::Vector2d w(d.frame_e1[i].dot(dn), d.frame_e2[i].dot(dn));
            // rows: [u0 u1 0; 0 u0 u1] * (s11, s12, s22) = w
            Eigen::Matrix<double, 2, 3> row;
            row << u[0], u[1], 0.0, 0.0, u[0], u[1];
            ata += row.transpose() * row;
            atb += row.transpose() * w;
        }
        const Eigen::Vector3d sv = ata.ldlt().solve(atb);
        Eigen::Matrix2d S;
        S << sv[0], sv[1], sv[1], sv[2];
        const double corr = 0.5 * (d.sigma1[i] - S.trace());
        S(0, 0) += corr;
        S(1, 1) += corr;
        d.shape_frame[i] = S;
    }

    // connectivity
    std::vector<char> seen(nv, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!bfs.empty()) {
        const int i = bfs.front();
        bfs.pop();
        for (int j : neighbors[i])
            if (!seen[j]) {
                seen[j] = 1;
                ++reached;
                bfs.push(j);
            }
    }
    d.connected = reached == nv;
    return d;
}

CurvatureSummary summarize_mesh(const TriangleMesh& mesh) {
    const MeshVertexData d = compute_mesh_vertex_data(mesh);
    const int nv = static_cast<int>(mesh.vertices.size());

    CurvatureSummary s;
    s.area = d.total_area;
    double defect_sum = 0;
    double s1 = 0, s1sq = 0;
    double min_s1 = std::numeric_limits<double>::infinity();
    double min_k = min_s1, max_k = -min_s1;
    for (int i = 0; i < nv; ++i) {
        defect_sum += d.defect[i];
        s1 += d.sigma1[i] * d.vertex_area[i];
        s1sq += d.sigma1[i] * d.sigma1[i] * d.vertex_area[i];
        min_s1 = std::min(min_s1, d.sigma1[i]);
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(d.shape_frame[i]);
        min_k = std::min(min_k, es.eigenvalues()[0]);
        max_k = std::max(max_k, es.eigenvalues()[1]);
    }
    s.sigma1_integral = s1;
    s.sigma1_sq_integral = s1sq;
    s.gauss_integral = defect_sum;  // angle defects telescope to 2 pi chi
    s.sigma_integrals = {s.area, s1, defect_sum};
    s.euler_char = nv - d.edge_count + static_cast<int>(mesh.faces.size());
    s.min_sigma1 = min_s1;
    s.min_principal = min_k;
    s.max_principal = max_k;

    double vol6 = 0;
    bool star = true;
    for (const auto& tri : mesh.faces) {
        const Eigen::Vector3d& a = mesh.vertices[tri[0]];
        const Eigen::Vector3d& b = mesh.vertices[tri[1]];
        const Eigen::Vector3d& c = mesh.vertices[tri[2]];
        vol6 += a.dot(b.cross(c));
        // star-shaped about the origin iff every face sees the origin from
        // its back side: <outward normal, position> > 0
        if ((b - a).cross(c - a).dot(a + b + c) <= 0.0) star = false;
    }
    s.enclosed_volume = vol6 / 6.0;

    s.dim = 3;
    s.hyperbolic = false;
    s.star_shaped = star;
    s.connected = d.connected;
    return s;
}

TriangleMesh make_icosphere(int subdivisions, double radius) {
    if (subdivisions < 0 || subdivisions > 8)
        throw std::invalid_argument("make_icosphere: subdivisions out of range");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangleMesh m;
    m.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                  {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},
               {5, 11, 4}, {11, 10, 2}, {10, 7, 6},  {7, 1, 8},  {3, 9, 4},   {3, 4, 2},
               {3, 2, 6},  {3, 6, 8},  {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10},
               {8, 6, 7},  {9, 8, 1}};
    for (auto& v : m.vertices) v.normalize();

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int idx = static_cast<int>(m.vertices.size());
            m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
            midpoint[key] = idx;
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(m.faces.size() * 4);
        for (const auto& f : m.faces) {
            const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
            next.push_back({f[0], a, c});
            next.push_back({f[1], b, a});
            next.push_back({f[2], c, b});
            next.push_back({a, b, c});
        }
        m.faces = std::move(next);
    }
    for (auto& v : m.vertices) v *= radius;
    return m;
}

TriangleMesh make_torus(double major, double minor, int nu, int nv) {
    if (!(major > minor && minor > 0)) throw std::invalid_argument("make_torus: need major > minor > 0");
    if (nu < 3 || nv < 3) throw std::invalid_argument("make_torus: need at least 3x3 segments");
    TriangleMesh m;
    m.vertices.reserve(static_cast<size_t>(nu) * nv);
    for (int i = 0; i < nu; ++i) {
        const double u = 2.0 * M_PI * i / nu;
        for (int j = 0; j < nv; ++j) {
            const double v = 2.0 * M_PI * j / nv;
            const double w = major + minor * std::cos(v);
            m.vertices.emplace_back(w * std::cos(u), w * std::sin(u), minor * std::sin(v));
        }
    }
    auto idx = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            m.faces.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
            m.faces.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
        }
    double vol6 = 0;
    for (const auto& tri : m.faces)
        vol6 += m.vertices[tri[0]].dot(m.vertices[tri[1]].cross(m.vertices[tri[2]]));
    if (vol6 < 0)
        for (auto& tri : m.faces) std::swap(tri[1], tri[2]);
    return m;
}

TriangleMesh mesh_from_radial_graph(const RadialGraphSurface& surf) {
    if (surf.ambient != Ambient::Euclidean3)
        throw std::invalid_argument("mesh_from_radial_graph: Euclidean graphs only");
    surf.validate();
    const int nt = surf.n_theta, np = surf.n_phi;
    TriangleMesh m;
    auto point = [&](int i, int j) {
        const double th = surf.theta(i), ph = surf.phi(j);
        const double r = surf.at(i, j);
        return Eigen::Vector3d(r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph),
                               r * std::cos(th));
    };
    // single vertex per pole, full rings in between
    m.vertices.push_back(point(0, 0));
    for (int i = 1; i < nt - 1; ++i)
        for (int j = 0; j < np; ++j) m.vertices.push_back(point(i, j));
    m.vertices.push_back(point(nt - 1, 0));
    const int south = static_cast<int>(m.vertices.size()) - 1;
    auto ring = [&](int i, int j) { return 1 + (i - 1) * np + (j % np); };

    for (int j = 0; j < np; ++j) m.faces.push_back({0, ring(1, j), ring(1, j + 1)});
    for (int i = 1; i < nt - 2; ++i)
        for (int j = 0; j < np; ++j) {
            m.faces.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
            m.faces.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
        }
    for (int j = 0; j < np; ++j) m.faces.push_back({south, ring(nt - 2, j + 1), ring(nt - 2, j)});
    return m;
}

}  // namespace capflow::surface
