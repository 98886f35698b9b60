// Regenerates the bundled example charges and configs under data/.

#include <fstream>
#include <iostream>

#include "heisflow/presets.hpp"
#include "heisflow/serialization.hpp"

using namespace heis;

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";

    {
        std::ofstream os(dir + "/annulus_charge.json");
        io::write_charge_json(os, annulus_charge());
    }
    {
        RunConfig c;
        c.n = 2;
        c.l = 1.0;
        c.eps = 0.1;
        c.grid = 0.04;
        c.dt = 0.02;
        c.transverse_points = 1;
        c.th.pairing_rel = 0.05;
        std::ofstream os(dir + "/annulus_config.json");
        io::write_config_json(os, c);
    }
    {
        const auto div = dipole_divergence();
        std::ofstream os(dir + "/dipole_charge.json");
        io::write_charge_json(os, dipole_charge(), &div);
    }
    {
        RunConfig c;
        c.n = 1;
        c.l = 3.0;
        c.eps = 0.1;
        c.grid = 0.05;
        c.dt = 0.02;
        c.transverse_points = 1;
        c.segment_dx = 0.02;
        c.th.plane_contact_band = 0.2;
        c.th.pairing_rel = 0.08;
        c.th.variation_rel = 0.25;
        c.th.support_fraction = 0.05;
        std::ofstream os(dir + "/dipole_config.json");
        io::write_config_json(os, c);
    }
    {
        std::ofstream os(dir + "/flow_seeds.json");
        os << "[[1,0,0]]\n";
    }
    {
        RunConfig c;
        c.n = 1;
        c.l = 1.0;
        c.t_max = 6.283185307179586476925286766559;  // one full rotation
        c.dt = c.t_max / 1024.0;
        std::ofstream os(dir + "/flow_config.json");
        io::write_config_json(os, c);
    }
    std::cout << "fixtures written to " << dir << "\n";
    return 0;
}
