#include "vrs/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "vrs/analysis.hpp"
#include "vrs/csv.hpp"
#include "vrs/detection.hpp"
#include "vrs/svg.hpp"

namespace vrs {

namespace {

namespace fs = std::filesystem;

const char* kSpectrumHeader = "omega_ueV,s_c,s_a,s_i1,s_i2,total,total_convolved";

void write_file(const fs::path& path, const std::string& content,
                std::vector<std::string>& written) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path.string());
    out << content;
    if (!out) throw Error("failed writing " + path.string());
    written.push_back(path.string());
}

std::string spectrum_rows(const ChannelSpectra& ch) {
    std::string body;
    for (std::size_t i = 0; i < ch.grid.n_points; ++i) {
        body += csv_line({format_double(ch.grid.value(i)),
                          format_double(ch.s_c[i]), format_double(ch.s_a[i]),
                          format_double(ch.s_i1[i]), format_double(ch.s_i2[i]),
                          format_double(ch.total[i]),
                          format_double(ch.total_conv[i])});
    }
    return body;
}

std::string spectrum_csv(const ChannelSpectra& ch) {
    return std::string(kSpectrumHeader) + "\n" + spectrum_rows(ch);
}

std::string sweep_spectrum_rows(double sweep_value, const ChannelSpectra& ch) {
    std::string body;
    const std::string sv = format_double(sweep_value);
    for (std::size_t i = 0; i < ch.grid.n_points; ++i) {
        body += csv_line({sv, format_double(ch.grid.value(i)),
                          format_double(ch.s_c[i]), format_double(ch.s_a[i]),
                          format_double(ch.s_i1[i]), format_double(ch.s_i2[i]),
                          format_double(ch.total[i]),
                          format_double(ch.total_conv[i])});
    }
    return body;
}

struct FitSummary {
    double splitting = 0.0;
    double peak_lo = 0.0, peak_hi = 0.0;
    double fwhm_lo = 0.0, fwhm_hi = 0.0;
    double area_lo = 0.0, area_hi = 0.0;
    double asymmetry = 0.0;  // (area_high - area_low) / (area_high + area_low)
    int n_peaks = 0;
};

FitSummary summarize_fit(const ChannelSpectra& ch, double instrument_fwhm) {
    const DoubletFit fit =
        fit_doublet(RawSpectrum{ch.grid, ch.total_conv}, instrument_fwhm);
    FitSummary s;
    s.n_peaks = static_cast<int>(fit.peak_energies.size());
    if (fit.peak_energies.size() == 2) {
        s.peak_lo = fit.peak_energies[0];
        s.peak_hi = fit.peak_energies[1];
        s.fwhm_lo = fit.linewidths[0];
        s.fwhm_hi = fit.linewidths[1];
        s.area_lo = fit.areas[0];
        s.area_hi = fit.areas[1];
        s.splitting = s.peak_hi - s.peak_lo;
        const double total = s.area_hi + s.area_lo;
        s.asymmetry = total != 0.0 ? (s.area_hi - s.area_lo) / total : 0.0;
    } else {
        s.peak_lo = s.peak_hi = fit.peak_energies[0];
        s.fwhm_lo = s.fwhm_hi = fit.linewidths[0];
        s.area_lo = s.area_hi = fit.areas[0];
    }
    return s;
}

const char* kSummaryHeader =
    "n_peaks,splitting_ueV,peak_lo_ueV,peak_hi_ueV,fwhm_lo_ueV,fwhm_hi_ueV,"
    "area_lo,area_hi,asymmetry";

std::string summary_cells(const FitSummary& s) {
    return csv_line({std::to_string(s.n_peaks), format_double(s.splitting),
                     format_double(s.peak_lo), format_double(s.peak_hi),
                     format_double(s.fwhm_lo), format_double(s.fwhm_hi),
                     format_double(s.area_lo), format_double(s.area_hi),
                     format_double(s.asymmetry)});
}

std::vector<SvgSeries> channel_series(const ChannelSpectra& ch) {
    return {{"s_c", "#1f77b4", &ch.s_c},
            {"s_a", "#2ca02c", &ch.s_a},
            {"s_i1", "#ff7f0e", &ch.s_i1},
            {"s_i2", "#9467bd", &ch.s_i2},
            {"total", "#000000", &ch.total},
            {"total conv.", "#777777", &ch.total_conv}};
}

void run_resonance(const RunConfig& cfg, const fs::path& out,
                   std::vector<std::string>& written) {
    const ChannelSpectra ch =
        detected_spectrum(cfg.qed_params(), cfg.detection_params(),
                          cfg.hilbert_space(), cfg.frequency_grid());
    write_file(out / "spectrum.csv", spectrum_csv(ch), written);

    const FitSummary s = summarize_fit(ch, cfg.instrument_fwhm);
    std::string summary = std::string("theta_deg,") + kSummaryHeader + "\n";
    summary += format_double(cfg.theta_effective()) + "," + summary_cells(s);
    write_file(out / "summary.csv", summary, written);

    if (cfg.svg)
        write_file(out / "spectrum.svg",
                   render_line_plot(ch.grid, channel_series(ch),
                                    "energy offset (ueV)", "intensity (arb.)"),
                   written);
}

void run_detuning_sweep(const RunConfig& cfg, const fs::path& out,
                        std::vector<std::string>& written) {
    const std::vector<ChannelSpectra> sweep =
        detuning_sweep(cfg.qed_params(), cfg.detection_params(),
                       cfg.hilbert_space(), cfg.sweep, cfg.frequency_grid());

    std::string spectra = std::string("sweep_value,") + kSpectrumHeader + "\n";
    std::string summary =
        std::string("detuning_ueV,") + kSummaryHeader + "\n";
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        spectra += sweep_spectrum_rows(cfg.sweep[i], sweep[i]);
        summary += format_double(cfg.sweep[i]) + "," +
                   summary_cells(summarize_fit(sweep[i], cfg.instrument_fwhm));
    }
    write_file(out / "sweep_spectra.csv", spectra, written);
    write_file(out / "sweep_summary.csv", summary, written);

    if (cfg.svg && !sweep.empty()) {
        std::vector<SvgSeries> series;
        std::vector<std::string> labels(sweep.size());
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            labels[i] = "detuning " + format_double(cfg.sweep[i]);
            const int shade = 32 + static_cast<int>(160 * i /
                                                    std::max<std::size_t>(
                                                        1, sweep.size() - 1));
            char color[8];
            std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade / 2,
                          shade / 2, shade);
            series.push_back({labels[i], color, &sweep[i].total_conv});
        }
        write_file(out / "sweep_spectra.svg",
                   render_line_plot(sweep[0].grid, series,
                                    "energy offset (ueV)", "intensity (arb.)"),
                   written);
    }
}

void run_hwp_sweep(const RunConfig& cfg, const fs::path& out,
                   std::vector<std::string>& written) {
    const QedParams qed = cfg.qed_params();
    const HilbertSpace space = cfg.hilbert_space();
    const FrequencyGrid grid = cfg.frequency_grid();
    // The expensive sign solutions do not depend on the polarizer angle.
    const SignSolution plus = solve_sign(qed, space, grid, +1);
    const SignSolution minus = solve_sign(qed, space, grid, -1);

    std::string spectra = std::string("sweep_value,") + kSpectrumHeader + "\n";
    std::string summary = std::string("alpha_deg,theta_deg,") + kSummaryHeader;
    summary += "\n";
    std::vector<ChannelSpectra> all;
    for (const double alpha : cfg.sweep) {
        DetectionParams det = cfg.detection_params();
        det.theta_proj = hwp_to_theta(alpha);
        const ChannelSpectra ch = average_and_convolve(
            compose_channels(plus, qed, det, grid),
            compose_channels(minus, qed, det, grid), det.instrument_fwhm);
        spectra += sweep_spectrum_rows(alpha, ch);
        summary += format_double(alpha) + "," + format_double(det.theta_proj) +
                   "," + summary_cells(summarize_fit(ch, cfg.instrument_fwhm));
        all.push_back(ch);
    }
    write_file(out / "hwp_spectra.csv", spectra, written);
    write_file(out / "hwp_summary.csv", summary, written);

    if (cfg.svg && !all.empty()) {
        std::vector<SvgSeries> series;
        std::vector<std::string> labels(all.size());
        for (std::size_t i = 0; i < all.size(); ++i) {
            labels[i] = "alpha " + format_double(cfg.sweep[i]);
            const int shade = 32 + static_cast<int>(
                                       160 * i /
                                       std::max<std::size_t>(1, all.size() - 1));
            char color[8];
            std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade,
                          shade / 2, shade / 2);
            series.push_back({labels[i], color, &all[i].total_conv});
        }
        write_file(out / "hwp_spectra.svg",
                   render_line_plot(all[0].grid, series, "energy offset (ueV)",
                                    "intensity (arb.)"),
                   written);
    }
}

struct DipMetrics {
    double separation = 0.0;
    double dip_ratio = 0.0;  // min between peaks / max peak (normalized dip)
};

DipMetrics dip_metrics(const ChannelSpectra& ch) {
    const RawSpectrum raw{ch.grid, ch.total};
    const std::vector<Peak> peaks = find_peaks(raw);
    if (peaks.size() < 2)
        throw Error("expected a doublet in the complementarity comparison");
    std::vector<Peak> by_height(peaks);
    std::sort(by_height.begin(), by_height.end(),
              [](const Peak& a, const Peak& b) { return a.height > b.height; });
    const double e1 = std::min(by_height[0].energy, by_height[1].energy);
    const double e2 = std::max(by_height[0].energy, by_height[1].energy);

    double dip = by_height[0].height;
    for (std::size_t i = 0; i < ch.grid.n_points; ++i) {
        const double x = ch.grid.value(i);
        if (x > e1 && x < e2) dip = std::min(dip, ch.total[i]);
    }
    return DipMetrics{e2 - e1, dip / by_height[0].height};
}

void run_complementarity(const RunConfig& cfg, const fs::path& out,
                         std::vector<std::string>& written) {
    const double drive = cfg.p_a > 0.0 ? cfg.p_a : cfg.p_c;
    if (drive <= 0.0)
        throw ValidationError("complementarity mode needs p_a or p_c > 0");

    RunConfig emitter_cfg = cfg;
    emitter_cfg.p_a = drive;
    emitter_cfg.p_c = 0.0;
    RunConfig cavity_cfg = cfg;
    cavity_cfg.p_a = 0.0;
    cavity_cfg.p_c = drive;

    const ChannelSpectra emitter_driven = detected_spectrum(
        emitter_cfg.qed_params(), cfg.detection_params(), cfg.hilbert_space(),
        cfg.frequency_grid());
    const ChannelSpectra cavity_driven = detected_spectrum(
        cavity_cfg.qed_params(), cfg.detection_params(), cfg.hilbert_space(),
        cfg.frequency_grid());

    write_file(out / "emitter_driven.csv", spectrum_csv(emitter_driven), written);
    write_file(out / "cavity_driven.csv", spectrum_csv(cavity_driven), written);

    const DipMetrics me = dip_metrics(emitter_driven);
    const DipMetrics mc = dip_metrics(cavity_driven);
    std::string summary = "drive,separation_ueV,dip_ratio\n";
    summary += csv_line({"emitter", format_double(me.separation),
                         format_double(me.dip_ratio)});
    summary += csv_line({"cavity", format_double(mc.separation),
                         format_double(mc.dip_ratio)});
    write_file(out / "complementarity_summary.csv", summary, written);

    if (cfg.svg) {
        const std::vector<SvgSeries> series = {
            {"emitter-driven", "#2ca02c", &emitter_driven.total},
            {"cavity-driven", "#1f77b4", &cavity_driven.total}};
        write_file(out / "complementarity.svg",
                   render_line_plot(emitter_driven.grid, series,
                                    "energy offset (ueV)", "intensity (arb.)"),
                   written);
    }
}

struct DataTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

DataTable read_csv_table(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file " + path.string());
    DataTable table;
    std::string line;
    bool first = true;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            table.header = cells;
            first = false;
            continue;
        }
        std::vector<double> row;
        for (const std::string& c : cells) {
            try {
                row.push_back(std::stod(c));
            } catch (...) {
                throw Error("malformed number in " + path.string() + " line " +
                            std::to_string(line_no));
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty() || table.rows.empty())
        throw Error("input file " + path.string() + " has no data");
    return table;
}

void run_fit(const RunConfig& cfg, const fs::path& out,
             std::vector<std::string>& written) {
    const DataTable table = read_csv_table(cfg.input_path);
    std::string result;
    if (table.header.size() >= 2 && table.header[0] == "alpha_deg") {
        std::vector<std::pair<double, double>> samples;
        for (const auto& row : table.rows) {
            if (row.size() < 2) throw Error("polarization rows need 2 columns");
            samples.emplace_back(row[0], row[1]);
        }
        const PolarizationFit fit = fit_polarization(samples);
        result = "theta_a_deg,phi_qd_deg,residual_norm,phi_identifiable\n";
        result += csv_line({format_double(fit.theta_a),
                            format_double(fit.phi_qd),
                            format_double(fit.residual_norm),
                            fit.phi_identifiable ? "true" : "false"});
    } else if (table.header.size() >= 2 && table.header[0] == "omega_ueV") {
        const std::size_t n = table.rows.size();
        if (n < 2) throw Error("spectrum input needs at least 2 rows");
        // Full spectrum schema: fit the blurred total. Plain two-column
        // files use their second column.
        std::size_t column = 1;
        for (std::size_t c = 1; c < table.header.size(); ++c)
            if (table.header[c] == "total_convolved") column = c;
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (table.rows[i].size() <= column)
                throw Error("spectrum rows are missing columns");
            values[i] = table.rows[i][column];
        }
        const double start = table.rows.front()[0];
        const double stop = table.rows.back()[0];
        const FrequencyGrid grid(start, stop, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(table.rows[i][0] - grid.value(i)) >
                1e-6 * grid.spacing())
                throw Error("spectrum input grid is not uniform");
        }
        const DoubletFit fit =
            fit_doublet(RawSpectrum{grid, values}, cfg.instrument_fwhm);
        result =
            "n_peaks,peak_lo_ueV,peak_hi_ueV,fwhm_lo_ueV,fwhm_hi_ueV,area_lo,"
            "area_hi,residual_norm\n";
        const bool two = fit.peak_energies.size() == 2;
        result += csv_line(
            {std::to_string(fit.peak_energies.size()),
             format_double(fit.peak_energies.front()),
             format_double(fit.peak_energies.back()),
             format_double(fit.linewidths.front()),
             format_double(fit.linewidths.back()),
             format_double(fit.areas.front()),
             format_double(two ? fit.areas.back() : fit.areas.front()),
             format_double(fit.residual_norm)});
    } else {
        throw Error(
            "unrecognized input header; expected alpha_deg,... or "
            "omega_ueV,...");
    }
    write_file(out / "fit_result.csv", result, written);
}

}  // namespace

std::vector<std::string> run(const RunConfig& config, std::ostream& diagnostics) {
    config.validate();
    const fs::path out(config.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec && !fs::is_directory(out))
        throw Error("cannot create output directory " + out.string());

    std::vector<std::string> written;
    switch (config.mode) {
        case RunMode::resonance: run_resonance(config, out, written); break;
        case RunMode::detuning_sweep:
            run_detuning_sweep(config, out, written);
            break;
        case RunMode::hwp_sweep: run_hwp_sweep(config, out, written); break;
        case RunMode::complementarity:
            run_complementarity(config, out, written);
            break;
        case RunMode::fit: run_fit(config, out, written); break;
    }
    for (const std::string& f : written) diagnostics << "wrote " << f << "\n";
    return written;
}

}  // namespace vrs
