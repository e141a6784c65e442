#include "screwgrasp/point_cloud.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "screwgrasp/errors.hpp"

namespace screwgrasp {

namespace {

struct PlyProperty {
  std::string name;
  bool is_list = false;
};

[[noreturn]] void parse_fail(int line, const std::string& what) {
  raise(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  for (std::string tok; iss >> tok;) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, int line) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    parse_fail(line, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size()) parse_fail(line, "trailing junk in number '" + tok + "'");
  return v;
}

}  // namespace

PointCloud load_ply(const std::string& path, int k_neighbors) {
  std::ifstream in(path);
  if (!in) raise(Errc::parse_error, "cannot open '" + path + "'");

  int line_no = 0;
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.rfind("comment", 0) == 0) continue;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    return false;
  };

  if (!next_line() || line != "ply") parse_fail(line_no, "missing 'ply' magic");
  if (!next_line() || split_ws(line) != std::vector<std::string>{"format", "ascii", "1.0"})
    parse_fail(line_no, "only 'format ascii 1.0' is supported");

  // Header: we care about the vertex element's scalar property layout;
  // other elements (faces etc.) are tolerated and their data skipped.
  long vertex_count = -1;
  std::vector<PlyProperty> vertex_props;
  std::vector<long> trailing_element_counts;
  bool in_vertex_element = false;

  while (true) {
    if (!next_line()) parse_fail(line_no, "unterminated header");
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "element") {
      if (tok.size() != 3) parse_fail(line_no, "malformed element line");
      long n = std::strtol(tok[2].c_str(), nullptr, 10);
      if (tok[1] == "vertex") {
        vertex_count = n;
        in_vertex_element = true;
      } else {
        trailing_element_counts.push_back(n);
        in_vertex_element = false;
      }
    } else if (tok[0] == "property") {
      if (tok.size() < 3) parse_fail(line_no, "malformed property line");
      if (in_vertex_element) {
        if (tok[1] == "list") parse_fail(line_no, "list property not allowed on vertices");
        vertex_props.push_back({tok.back(), false});
      }
    } else if (tok[0] != "obj_info") {
      parse_fail(line_no, "unexpected header keyword '" + tok[0] + "'");
    }
  }

  if (vertex_count < 0) parse_fail(line_no, "no vertex element declared");
  if (vertex_count == 0) raise(Errc::empty_cloud, "'" + path + "' declares zero vertices");

  auto prop_index = [&](const char* name) -> int {
    for (size_t i = 0; i < vertex_props.size(); ++i)
      if (vertex_props[i].name == name) return static_cast<int>(i);
    return -1;
  };
  int ix = prop_index("x"), iy = prop_index("y"), iz = prop_index("z");
  if (ix < 0 || iy < 0 || iz < 0) parse_fail(line_no, "vertex element lacks x/y/z");
  int inx = prop_index("nx"), iny = prop_index("ny"), inz = prop_index("nz");
  bool with_normals = inx >= 0 && iny >= 0 && inz >= 0;

  PointCloud cloud;
  cloud.frame_tag = "object";
  cloud.points.reserve(vertex_count);
  if (with_normals) cloud.normals.reserve(vertex_count);

  for (long v = 0; v < vertex_count; ++v) {
    if (!next_line()) parse_fail(line_no, "vertex data ends early");
    auto tok = split_ws(line);
    if (tok.size() != vertex_props.size())
      parse_fail(line_no, "expected " + std::to_string(vertex_props.size()) + " values, got " +
                              std::to_string(tok.size()));
    cloud.points.emplace_back(parse_double(tok[ix], line_no), parse_double(tok[iy], line_no),
                              parse_double(tok[iz], line_no));
    if (with_normals) {
      Vec3 n(parse_double(tok[inx], line_no), parse_double(tok[iny], line_no),
             parse_double(tok[inz], line_no));
      double len = n.norm();
      if (len < 1e-12) parse_fail(line_no, "zero-length normal");
      cloud.normals.push_back(n / len);
    }
  }

  if (!with_normals) estimate_normals(cloud, k_neighbors);
  return cloud;
}

void save_ply(const PointCloud& cloud, const std::string& path, const std::vector<Color>* colors) {
  if (colors && static_cast<int>(colors->size()) != cloud.size())
    raise(Errc::dimension_mismatch, "color count does not match point count");

  std::ofstream out(path);
  if (!out) raise(Errc::parse_error, "cannot write '" + path + "'");

  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << cloud.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  bool with_normals = cloud.has_normals();
  if (with_normals) out << "property double nx\nproperty double ny\nproperty double nz\n";
  if (colors) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";

  out.precision(17);
  for (int i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    out << p.x() << " " << p.y() << " " << p.z();
    if (with_normals) {
      const Vec3& n = cloud.normals[i];
      out << " " << n.x() << " " << n.y() << " " << n.z();
    }
    if (colors) {
      const Color& c = (*colors)[i];
      out << " " << int(c.r) << " " << int(c.g) << " " << int(c.b);
    }
    out << "\n";
  }
  if (!out) raise(Errc::parse_error, "write failed for '" + path + "'");
}

void estimate_normals(PointCloud& cloud, int k_neighbors) {
  const int n = cloud.size();
  if (n < 3) raise(Errc::degenerate_neighborhood, "need at least 3 points to estimate normals");
  int k = std::clamp(k_neighbors, 3, n);

  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : cloud.points) centroid += p;
  centroid /= n;

  cloud.normals.assign(n, Vec3::Zero());

  std::vector<std::pair<double, int>> dist(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      dist[j] = {(cloud.points[j] - cloud.points[i]).squaredNorm(), j};
    std::nth_element(dist.begin(), dist.begin() + k - 1, dist.end());

    Vec3 mean = Vec3::Zero();
    for (int j = 0; j < k; ++j) mean += cloud.points[dist[j].second];
    mean /= k;
    Mat3 scatter = Mat3::Zero();
    for (int j = 0; j < k; ++j) {
      Vec3 d = cloud.points[dist[j].second] - mean;
      scatter += d * d.transpose();
    }

    Vec3 outward = cloud.points[i] - centroid;
    Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);
    // eigenvalues ascending; a vanishing middle one means the neighborhood
    // is a line or a point and the plane fit is meaningless
    bool degenerate = eig.eigenvalues()[1] <= 1e-12 * std::max(1.0, eig.eigenvalues()[2]);

    Vec3 normal;
    if (degenerate) {
      normal = outward.norm() > 1e-12 ? outward.normalized() : Vec3::UnitZ();
    } else {
      normal = eig.eigenvectors().col(0);
      if (normal.dot(outward) < 0.0) normal = -normal;
    }
    cloud.normals[i] = normal;
  }
}

PointCloud apply_pose(const PointCloud& cloud, const Pose& g, std::string frame_tag) {
  PointCloud out;
  out.frame_tag = std::move(frame_tag);
  out.points.reserve(cloud.points.size());
  out.normals.reserve(cloud.normals.size());
  for (const Vec3& p : cloud.points) out.points.push_back(g.apply(p));
  for (const Vec3& n : cloud.normals) out.normals.push_back(g.rotate(n));
  return out;
}

std::vector<PointCloud> transform_point_cloud(const PointCloud& cloud,
                                              const std::vector<Pose>& plan) {
  if (plan.empty()) raise(Errc::empty_input, "plan has no poses");
  std::vector<PointCloud> out;
  out.reserve(plan.size());
  Pose base_inv = pose_inverse(plan[0]);
  for (size_t i = 0; i < plan.size(); ++i) {
    if (i == 0) {
      out.push_back(cloud);  // copy, bit-identical by contract
      out.back().frame_tag = "pose0";
    } else {
      out.push_back(apply_pose(cloud, pose_compose(base_inv, plan[i]),
                               "pose" + std::to_string(i)));
    }
  }
  return out;
}

}  // namespace screwgrasp
