// vrs-sim: emission spectra of a lossy cavity strongly coupled to a single
// two-level emitter, with polarizer-resolved detection channels.
//
// Usage: vrs-sim <config.ini> [--svg] [--out DIR] [--grid-points N]
// Exit codes: 0 ok, 2 config error, 3 numeric error.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "vrs/run.hpp"

namespace {

void print_usage(std::ostream& os) {
    os << "usage: vrs-sim <config.ini> [--svg] [--out DIR] [--grid-points N]\n";
}

}  // namespace

int main(int argc, char** argv) {
    std::string config_path;
    bool svg_override = false;
    std::string out_override;
    long grid_points_override = -1;

    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--svg") {
            svg_override = true;
        } else if (arg == "--out") {
            if (++i >= argc) {
                std::cerr << "--out needs a directory argument\n";
                return 2;
            }
            out_override = argv[i];
        } else if (arg == "--grid-points") {
            if (++i >= argc) {
                std::cerr << "--grid-points needs a number\n";
                return 2;
            }
            const std::string v = argv[i];
            const auto res =
                std::from_chars(v.data(), v.data() + v.size(), grid_points_override);
            if (res.ec != std::errc{} || res.ptr != v.data() + v.size() ||
                grid_points_override < 2) {
                std::cerr << "--grid-points needs an integer >= 2\n";
                return 2;
            }
        } else if (arg == "--help" || arg == "-h") {
            print_usage(std::cout);
            return 0;
        } else if (!arg.empty() && arg[0] == '-') {
            std::cerr << "unknown flag '" << arg << "'\n";
            print_usage(std::cerr);
            return 2;
        } else if (config_path.empty()) {
            config_path = arg;
        } else {
            std::cerr << "unexpected extra argument '" << arg << "'\n";
            return 2;
        }
    }
    if (config_path.empty()) {
        print_usage(std::cerr);
        return 2;
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "cannot open config file " << config_path << "\n";
        return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    try {
        vrs::RunConfig config = vrs::parse_config(buffer.str());
        if (svg_override) config.svg = true;
        if (!out_override.empty()) config.out_dir = out_override;
        if (grid_points_override >= 2)
            config.grid_points = static_cast<std::size_t>(grid_points_override);
        config.validate();
        vrs::run(config, std::cout);
        return 0;
    } catch (const vrs::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const vrs::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const vrs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
