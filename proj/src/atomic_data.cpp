#include "starkmem/atomic_data.hpp"

#include "starkmem/angular_momentum.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace starkmem {

const TransitionEntry& TransitionCatalog::at(int f, int f_prime) const
{
    auto it = entries_.find({f, f_prime});
    if (it == entries_.end()) {
        throw std::out_of_range("no D1 transition F=" + std::to_string(f) +
                                " -> F'=" + std::to_string(f_prime));
    }
    return it->second;
}

double TransitionCatalog::scalar_weight(int f, int f_prime) const
{
    const double r = at(f, f_prime).reduced_element;
    return 2.0 / 3.0 * r * r;
}

AtomSystem::AtomSystem(PhysicalConstants constants, int twice_nuclear_spin,
                       std::vector<HyperfineManifold> ground,
                       std::vector<HyperfineManifold> excited, double line_center,
                       TransitionCatalog catalog)
    : constants_(constants),
      twice_i_(twice_nuclear_spin),
      ground_(std::move(ground)),
      excited_(std::move(excited)),
      line_center_(line_center),
      catalog_(std::move(catalog))
{
    auto by_energy = [](const HyperfineManifold& a, const HyperfineManifold& b) {
        return a.offset < b.offset;
    };
    std::sort(ground_.begin(), ground_.end(), by_energy);
    std::sort(excited_.begin(), excited_.end(), by_energy);
    if (ground_.empty() || excited_.empty()) {
        throw std::invalid_argument("atom needs ground and excited manifolds");
    }
}

const HyperfineManifold& AtomSystem::ground(int f) const
{
    for (const auto& m : ground_) {
        if (m.f == f) return m;
    }
    throw std::out_of_range("no ground manifold F=" + std::to_string(f));
}

const HyperfineManifold& AtomSystem::excited(int f) const
{
    for (const auto& m : excited_) {
        if (m.f == f) return m;
    }
    throw std::out_of_range("no excited manifold F'=" + std::to_string(f));
}

double AtomSystem::reference_transition() const
{
    return catalog_.at(lower_ground_f(), storage_excited_f()).omega;
}

double AtomSystem::natural_linewidth() const
{
    return catalog_.entries().begin()->second.linewidth;
}

AtomSystem load_rb85()
{
    using namespace units;
    const PhysicalConstants k;

    // 5S1/2 and 5P1/2 hyperfine offsets from the fine-structure centroids.
    std::vector<HyperfineManifold> ground = {
        {2, -1.0 / 3.0, ghz_to_rad_per_us(-1.7708439228)},
        {3, +1.0 / 3.0, ghz_to_rad_per_us(+1.2648885163)},
    };
    // Excited-state g-factors are not used by the storage model.
    std::vector<HyperfineManifold> excited = {
        {2, -1.0 / 9.0, ghz_to_rad_per_us(-0.210923)},
        {3, +1.0 / 9.0, ghz_to_rad_per_us(+0.150659)},
    };
    const double line_center = ghz_to_rad_per_us(377107.385690);
    const double linewidth = hz_to_rad_per_us(5.7500e6);

    TransitionCatalog catalog;
    catalog.hyperfine_splitting = ghz_to_rad_per_us(3.0357324390);
    catalog.fine_structure_splitting = ghz_to_rad_per_us(7123.0);
    catalog.reduced_dipole_si = 2.9928 * k.elementary_charge * k.bohr_radius;

    const HalfInteger j = HalfInteger::half(1);
    const HalfInteger nuclear = HalfInteger::half(5);
    for (const auto& g : ground) {
        for (const auto& e : excited) {
            const double r = reduced_dipole(HalfInteger{g.f}, HalfInteger{e.f}, j, j, nuclear);
            if (r == 0.0) continue;
            catalog.add({g.f, e.f, line_center + e.offset - g.offset, linewidth, r});
        }
    }
    return AtomSystem(k, 5, std::move(ground), std::move(excited), line_center,
                      std::move(catalog));
}

}  // namespace starkmem
