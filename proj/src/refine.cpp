#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "fluxls/mesh.hpp"

namespace fluxls {

namespace {

std::uint64_t pair_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Mutable triangulation used while bisecting. Triangles are stored as ccw
// vertex triples; the edge table maps a vertex pair to its (at most two)
// triangles.
class Bisector {
 public:
  Bisector(const Mesh& mesh, std::size_t vertex_cap)
      : verts_(mesh.vertices().begin(), mesh.vertices().end()), cap_(vertex_cap) {
    tris_.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 2);
    for (const auto& t : mesh.triangles()) tris_.push_back(t.vertices);
    original_.assign(tris_.size(), true);
    parent_.resize(tris_.size());
    std::iota(parent_.begin(), parent_.end(), 0);
    edges_.reserve(static_cast<std::size_t>(mesh.n_edges()) * 2);
    for (Index t = 0; t < static_cast<Index>(tris_.size()); ++t) {
      for (int i = 0; i < 3; ++i) attach(local_edge(t, i), t);
    }
    if (mesh.snapper()) snap_ = mesh.snapper()->snap;
  }

  void refine_triangle(Index t) {
    while (original_[static_cast<std::size_t>(t)]) {
      Index cur = t;
      for (;;) {
        const int i = longest_local_edge(cur);
        const auto [a, b] = local_edge(cur, i);
        const Index nb = neighbor(cur, a, b);
        if (nb < 0) {
          Vec2 m = 0.5 * (verts_[a] + verts_[b]);
          if (snap_) m = snap_(m);
          const Index mid = add_vertex(m);
          bisect(cur, i, mid);
          break;
        }
        const int j = longest_local_edge(nb);
        const auto [c, d] = local_edge(nb, j);
        if (pair_key(a, b) == pair_key(c, d)) {
          const Index mid = add_vertex(0.5 * (verts_[a] + verts_[b]));
          bisect(cur, i, mid);
          bisect(nb, j, mid);
          break;
        }
        cur = nb;
      }
    }
  }

  Mesh finish(const Mesh& source) {
    Mesh out = build_mesh(verts_, tris_, source.snapper());
    return out;
  }

  std::span<const Index> parents() const { return parent_; }

 private:
  std::pair<Index, Index> local_edge(Index t, int i) const {
    const auto& v = tris_[static_cast<std::size_t>(t)];
    return {v[(i + 1) % 3], v[(i + 2) % 3]};
  }

  double edge_length(Index a, Index b) const { return distance(verts_[a], verts_[b]); }

  // Longest edge with a tie-break that depends only on the edge itself, so
  // the two triangles sharing an edge agree on it.
  int longest_local_edge(Index t) const {
    int best = 0;
    auto [a0, b0] = local_edge(t, 0);
    double best_len = edge_length(a0, b0);
    std::uint64_t best_key = pair_key(a0, b0);
    for (int i = 1; i < 3; ++i) {
      const auto [a, b] = local_edge(t, i);
      const double len = edge_length(a, b);
      const std::uint64_t key = pair_key(a, b);
      const double tol = 1e-12 * std::max(len, best_len);
      if (len > best_len + tol || (std::abs(len - best_len) <= tol && key > best_key)) {
        best = i;
        best_len = len;
        best_key = key;
      }
    }
    return best;
  }

  Index neighbor(Index t, Index a, Index b) const {
    const auto& slots = edges_.at(pair_key(a, b));
    return slots[0] == t ? slots[1] : slots[0];
  }

  void attach(std::pair<Index, Index> e, Index t) {
    auto [it, inserted] = edges_.try_emplace(pair_key(e.first, e.second), std::array<Index, 2>{t, -1});
    if (!inserted) {
      auto& s = it->second;
      if (s[0] < 0) {
        s[0] = t;
      } else {
        s[1] = t;
      }
    }
  }

  void detach(std::pair<Index, Index> e, Index t) {
    const auto it = edges_.find(pair_key(e.first, e.second));
    auto& s = it->second;
    if (s[0] == t) {
      s[0] = s[1];
      s[1] = -1;
    } else if (s[1] == t) {
      s[1] = -1;
    }
    if (s[0] < 0) edges_.erase(it);
  }

  Index add_vertex(const Vec2& p) {
    if (verts_.size() >= cap_) {
      throw MeshError("refinement budget exceeded: closure needs more than " + std::to_string(cap_) +
                      " vertices");
    }
    verts_.push_back(p);
    return static_cast<Index>(verts_.size() - 1);
  }

  // Splits triangle t through the midpoint of its local edge i.
  void bisect(Index t, int i, Index mid) {
    const auto v = tris_[static_cast<std::size_t>(t)];
    const Index apex = v[i];
    const Index p = v[(i + 1) % 3];
    const Index q = v[(i + 2) % 3];
    const auto child = static_cast<Index>(tris_.size());

    detach({p, q}, t);
    detach({q, apex}, t);
    tris_[static_cast<std::size_t>(t)] = {apex, p, mid};
    tris_.push_back({apex, mid, q});
    original_[static_cast<std::size_t>(t)] = false;
    original_.push_back(false);
    parent_.push_back(parent_[static_cast<std::size_t>(t)]);

    attach({p, mid}, t);
    attach({mid, apex}, t);
    attach({apex, mid}, child);
    attach({mid, q}, child);
    attach({q, apex}, child);
  }

  std::vector<Vec2> verts_;
  std::vector<std::array<Index, 3>> tris_;
  std::vector<bool> original_;
  std::vector<Index> parent_;
  std::unordered_map<std::uint64_t, std::array<Index, 2>> edges_;
  std::function<Vec2(const Vec2&)> snap_;
  std::size_t cap_;
};

}  // namespace

Mesh refine(const Mesh& mesh, std::span<const Index> marked, std::size_t vertex_cap) {
  if (marked.empty()) throw MeshError("refine called with an empty marked set");
  for (Index t : marked) {
    if (t < 0 || t >= mesh.n_triangles()) {
      throw MeshError("marked triangle id " + std::to_string(t) + " out of range");
    }
  }
  Bisector work(mesh, vertex_cap);
  for (Index t : marked) work.refine_triangle(t);

  Mesh out = work.finish(mesh);
  out.parents_.assign(work.parents().begin(), work.parents().end());
  out.generation_ = mesh.generation_ + 1;
  if (mesh.classified()) out = classify_boundary(std::move(out), mesh.advection());
  return out;
}

Mesh uniform_refine(const Mesh& mesh, std::size_t vertex_cap) {
  std::vector<Index> all(static_cast<std::size_t>(mesh.n_triangles()));
  std::iota(all.begin(), all.end(), 0);
  return refine(mesh, all, vertex_cap);
}

}  // namespace fluxls
