#include "group/measure.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "core/error.hpp"

namespace horolab {

namespace {

// Exact merge key for tree words and star permutations; half-plane atoms are
// merged by a linear scan with the entrywise tolerance instead.
std::string exact_key(const SpaceModel& s, const Isometry& g) {
  switch (s.kind) {
    case SpaceKind::free_group_tree:
      return word_format(std::get<TreeIso>(g).word);
    case SpaceKind::star: {
      std::string k;
      for (uint32_t v : std::get<StarIso>(g).perm) {
        k += std::to_string(v);
        k += ',';
      }
      return k;
    }
    case SpaceKind::upper_half_plane:
      return {};
  }
  return {};
}

class AtomMerger {
 public:
  explicit AtomMerger(const SpaceModel& s) : space_(s) {}

  void add(const Isometry& g, double weight) {
    if (space_.kind == SpaceKind::upper_half_plane) {
      for (size_t i = 0; i < atoms_.size(); ++i) {
        if (isometries_equal(space_, atoms_[i], g, kAtomMergeTol)) {
          weights_[i] += weight;
          return;
        }
      }
      atoms_.push_back(g);
      weights_.push_back(weight);
      return;
    }
    auto key = exact_key(space_, g);
    auto it = index_.find(key);
    if (it != index_.end()) {
      weights_[it->second] += weight;
      return;
    }
    index_.emplace(std::move(key), atoms_.size());
    atoms_.push_back(g);
    weights_.push_back(weight);
  }

  size_t size() const { return atoms_.size(); }

  FiniteSupportMeasure take() {
    FiniteSupportMeasure m;
    m.kind = space_.kind;
    m.atoms = std::move(atoms_);
    m.weights = std::move(weights_);
    return m;
  }

 private:
  const SpaceModel& space_;
  std::vector<Isometry> atoms_;
  std::vector<double> weights_;
  std::unordered_map<std::string, size_t> index_;
};

}  // namespace

FiniteSupportMeasure make_measure(const SpaceModel& s, std::vector<Isometry> atoms,
                                  std::vector<double> weights) {
  FiniteSupportMeasure m;
  m.kind = s.kind;
  m.atoms = std::move(atoms);
  m.weights = std::move(weights);
  validate_measure(s, m);
  return m;
}

void validate_measure(const SpaceModel& s, const FiniteSupportMeasure& mu) {
  require(mu.kind == s.kind, Errc::invalid_measure, "measure belongs to a different space");
  require(!mu.atoms.empty(), Errc::invalid_measure, "measure needs at least one atom");
  require(mu.atoms.size() == mu.weights.size(), Errc::invalid_measure,
          "atom and weight counts differ");
  double total = 0.0;
  for (double w : mu.weights) {
    require(w > 0.0, Errc::invalid_measure, "weights must be positive");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, Errc::invalid_measure,
          "weights must sum to 1 within 1e-12");
  for (const auto& g : mu.atoms)
    require(isometry_in_space(s, g), Errc::invalid_measure, "atom outside the configured space");
  for (size_t i = 0; i < mu.atoms.size(); ++i)
    for (size_t j = i + 1; j < mu.atoms.size(); ++j)
      require(!isometries_equal(s, mu.atoms[i], mu.atoms[j],
                                s.kind == SpaceKind::upper_half_plane ? kAtomMergeTol : 0.0),
              Errc::invalid_measure, "atoms must be pairwise distinct");
}

FiniteSupportMeasure dirac(const SpaceModel& s, Isometry g) {
  return make_measure(s, {std::move(g)}, {1.0});
}

bool in_group_ball(const SpaceModel& s, double visual_base, const FiniteSupportMeasure& mu,
                   double lambda) {
  for (const auto& g : mu.atoms)
    if (std::pow(visual_base, displacement(s, g)) >= lambda) return false;
  return true;
}

FiniteSupportMeasure convolve(const SpaceModel& s, const FiniteSupportMeasure& mu,
                              const FiniteSupportMeasure& nu) {
  require(mu.kind == s.kind && nu.kind == s.kind, Errc::invalid_measure,
          "convolution needs measures on the configured space");
  AtomMerger merger(s);
  for (size_t i = 0; i < mu.atoms.size(); ++i)
    for (size_t j = 0; j < nu.atoms.size(); ++j)
      merger.add(compose(s, mu.atoms[i], nu.atoms[j]), mu.weights[i] * nu.weights[j]);
  return merger.take();
}

FiniteSupportMeasure convolution_power(const SpaceModel& s, const FiniteSupportMeasure& mu,
                                       uint32_t n, uint64_t support_cap) {
  require(n >= 1, Errc::invalid_measure, "convolution power needs n >= 1");
  FiniteSupportMeasure acc = mu;
  for (uint32_t k = 1; k < n; ++k) {
    acc = convolve(s, acc, mu);
    if (acc.size() > support_cap)
      fail(Errc::support_explosion, "convolution support exceeded the enumeration cap (" +
                                        std::to_string(support_cap) + ") at power " +
                                        std::to_string(k + 1));
  }
  return acc;
}

double expected_displacement(const SpaceModel& s, const FiniteSupportMeasure& mu) {
  double total = 0.0;
  for (size_t i = 0; i < mu.atoms.size(); ++i)
    total += mu.weights[i] * displacement(s, mu.atoms[i]);
  return total;
}

std::vector<double> cumulative_weights(const FiniteSupportMeasure& mu) {
  std::vector<double> c(mu.weights.size());
  double acc = 0.0;
  for (size_t i = 0; i < mu.weights.size(); ++i) {
    acc += mu.weights[i];
    c[i] = acc;
  }
  c.back() = 1.0;
  return c;
}

}  // namespace horolab
