#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "specreg/cli.hpp"
#include "specreg/error.hpp"

namespace specreg::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    return out;
}

void close_checked(std::ofstream &out, const fs::path &path) {
    out.close();
    if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_rate_results(const fs::path &path, const std::vector<RateReport> &reports) {
    auto out = open_out(path);
    out << "filter,gamma,n,trial,lambda,sq_error\n";
    for (const auto &rep : reports) {
        for (const auto &t : rep.trials) {
            out << rep.filter << ',' << format_double(rep.gamma) << ',' << t.n << ',' << t.trial << ','
                << format_double(t.lambda) << ',' << format_double(t.sq_error) << '\n';
        }
    }
    close_checked(out, path);
}

void write_rate_summary(const fs::path &path, const std::vector<RateReport> &reports,
                        const std::optional<SaturationResult> &saturation) {
    auto out = open_out(path);
    out << "filter,gamma,slope,stderr,theory_exponent\n";
    for (const auto &rep : reports) {
        out << rep.filter << ',' << format_double(rep.gamma) << ',' << format_double(rep.fitted_slope) << ','
            << format_double(rep.slope_stderr) << ',' << format_double(rep.theoretical_exponent) << '\n';
    }
    if (saturation) {
        const double se = std::hypot(saturation->pcr.slope_stderr, saturation->ridge.slope_stderr);
        out << "pcr_minus_ridge," << format_double(0.0) << ',' << format_double(saturation->separation) << ','
            << format_double(se) << ',' << format_double(saturation->theoretical_separation) << '\n';
    }
    close_checked(out, path);
}

std::vector<fs::path> emit_plot_data(const std::vector<RateReport> &reports, const fs::path &dir,
                                     const std::string &stem) {
    std::vector<fs::path> files;
    for (const auto &rep : reports) {
        if (rep.n_grid.empty()) throw Error(ErrorCode::BadParams, "empty rate report");
        const fs::path path = dir / (stem + "_" + rep.filter + ".dat");
        auto out = open_out(path);
        out << "# log10_n log10_mean_sq_error (" << rep.filter << ", gamma=" << format_double(rep.gamma) << ")\n";
        for (std::size_t i = 0; i < rep.n_grid.size(); ++i) {
            out << format_double(std::log10(static_cast<double>(rep.n_grid[i]))) << ' '
                << format_double(std::log10(rep.mean_sq_error[i])) << '\n';
        }
        close_checked(out, path);
        files.push_back(path);
    }
    const fs::path script = dir / (stem + ".gp");
    auto out = open_out(script);
    out << "# gnuplot " << script.filename().string() << "\n";
    out << "set xlabel 'log10 n'\nset ylabel 'log10 mean squared error'\nset key top right\n";
    out << "plot ";
    for (std::size_t i = 0; i < files.size(); ++i) {
        out << (i ? ", \\\n     " : "") << "'" << files[i].filename().string() << "' using 1:2 with linespoints title '"
            << reports[i].filter << "'";
    }
    out << "\n";
    close_checked(out, script);
    return files;
}

std::vector<std::pair<double, double>> read_plot_data(const fs::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        is.imbue(std::locale::classic());
        double x = 0.0;
        double y = 0.0;
        if (!(is >> x >> y)) throw Error(ErrorCode::IoError, "malformed row in '" + path.string() + "'");
        rows.emplace_back(x, y);
    }
    return rows;
}

}  // namespace specreg::cli
