// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0

#include "vecfi/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "vecfi/errors.hpp"

namespace vecfi {

namespace {

std::string fmt_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string fmt_sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

struct Bucket {
    std::uint64_t masked = 0, fs = 0, fd = 0, sdc = 0;
    std::uint64_t sum_k = 0;
    std::uint64_t nonfinite_trials = 0;
    std::vector<double> rmses;
};

} // namespace

std::string GroupKey::label() const {
    std::string out = precision;
    for (const std::string* part : {&kernel, &target}) {
        if (part->empty()) continue;
        if (!out.empty()) out += '_';
        out += *part;
    }
    return out;
}

std::vector<CampaignResult> aggregate(std::vector<TrialRecord> records,
                                      const GroupSelector& select) {
    std::stable_sort(records.begin(), records.end(),
                     [](const TrialRecord& a, const TrialRecord& b) {
                         return a.trial_index < b.trial_index;
                     });
    std::map<GroupKey, Bucket> buckets;
    for (const TrialRecord& rec : records) {
        Bucket& b = buckets[select(rec)];
        switch (rec.cls) {
        case OutcomeClass::Masked: ++b.masked; break;
        case OutcomeClass::FS: ++b.fs; break;
        case OutcomeClass::FD: ++b.fd; break;
        }
        if (rec.sdc) {
            ++b.sdc;
            b.sum_k += rec.sev.k;
            if (rec.sev.nonfinite_count > 0) ++b.nonfinite_trials;
            if (rec.sev.rmse) b.rmses.push_back(*rec.sev.rmse);
        }
    }
    std::vector<CampaignResult> results;
    results.reserve(buckets.size());
    for (auto& [key, b] : buckets) {
        CampaignResult r;
        r.key = key;
        r.masked = b.masked;
        r.fs = b.fs;
        r.fd = b.fd;
        r.sdc = b.sdc;
        r.nonfinite_trials = b.nonfinite_trials;
        if (b.sdc > 0)
            r.avg_k = static_cast<double>(b.sum_k) /
                      static_cast<double>(b.sdc);
        if (!b.rmses.empty()) {
            RmseStats st;
            double sum = 0.0;
            for (double v : b.rmses) sum += v;
            st.mean = sum / static_cast<double>(b.rmses.size());
            std::sort(b.rmses.begin(), b.rmses.end());
            st.median = b.rmses[(b.rmses.size() - 1) / 2];
            st.max = b.rmses.back();
            r.rmse_stats = st;
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::string emit_results_csv(const std::vector<CampaignResult>& results) {
    std::string out = "precision,kernel,target,fault_kind,trials,masked,fs,"
                      "fd,sdc,avg_k,rmse_mean,rmse_median,rmse_max,"
                      "nonfinite_trials\n";
    for (const CampaignResult& r : results) {
        out += r.key.precision + ',' + r.key.kernel + ',' + r.key.target +
               ',' + r.key.fault_kind + ',';
        out += std::to_string(r.total()) + ',' + std::to_string(r.masked) +
               ',' + std::to_string(r.fs) + ',' + std::to_string(r.fd) +
               ',' + std::to_string(r.sdc) + ',';
        if (r.avg_k) out += format_double(*r.avg_k);
        out += ',';
        if (r.rmse_stats) {
            out += format_double(r.rmse_stats->mean) + ',' +
                   format_double(r.rmse_stats->median) + ',' +
                   format_double(r.rmse_stats->max);
        } else {
            out += ",,";
        }
        out += ',' + std::to_string(r.nonfinite_trials) + '\n';
    }
    return out;
}

std::string emit_results_json(const std::vector<CampaignResult>& results) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const CampaignResult& r : results) {
        nlohmann::ordered_json row;
        row["precision"] = r.key.precision;
        row["kernel"] = r.key.kernel;
        row["target"] = r.key.target;
        row["fault_kind"] = r.key.fault_kind;
        row["trials"] = r.total();
        row["counts"] = {{"masked", r.masked},
                         {"fs", r.fs},
                         {"fd", r.fd},
                         {"sdc", r.sdc}};
        if (r.avg_k) row["avg_k"] = *r.avg_k;
        else row["avg_k"] = nullptr;
        if (r.rmse_stats) {
            row["rmse_stats"] = {{"mean", r.rmse_stats->mean},
                                 {"median", r.rmse_stats->median},
                                 {"max", r.rmse_stats->max}};
        } else {
            row["rmse_stats"] = nullptr;
        }
        row["nonfinite_trials"] = r.nonfinite_trials;
        arr.push_back(std::move(row));
    }
    return arr.dump(2) + '\n';
}

std::string emit_records_csv(const std::vector<TrialRecord>& records) {
    std::string out =
        "trial_index,site_id,bit,cycle,class,sdc,K,rmse,nonfinite_count\n";
    for (const TrialRecord& rec : records) {
        out += std::to_string(rec.trial_index) + ',' + rec.site_id + ',' +
               std::to_string(rec.fault.bit) + ',' +
               std::to_string(rec.fault.cycle) + ',';
        out += std::string(outcome_class_name(rec.cls)) + ',';
        out += rec.sdc ? "1," : "0,";
        out += std::to_string(rec.sev.k) + ',';
        if (rec.sev.rmse) out += format_double(*rec.sev.rmse);
        out += ',' + std::to_string(rec.sev.nonfinite_count) + '\n';
    }
    return out;
}

std::vector<TrialRecord> parse_records_csv(const std::string& text) {
    std::vector<TrialRecord> records;
    std::istringstream stream(text);
    std::string line;
    bool first = true;
    while (std::getline(stream, line)) {
        if (first) {
            first = false;
            continue;
        }
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 9)
            throw ConfigError("malformed record row: " + line);
        TrialRecord rec;
        rec.trial_index = static_cast<std::uint32_t>(std::stoul(cells[0]));
        rec.site_id = cells[1];
        if (const auto key = parse_site_id(cells[1])) rec.fault.site = *key;
        rec.fault.bit = static_cast<std::uint32_t>(std::stoul(cells[2]));
        rec.fault.cycle = static_cast<std::uint32_t>(std::stoul(cells[3]));
        if (cells[4] == "masked") rec.cls = OutcomeClass::Masked;
        else if (cells[4] == "fs") rec.cls = OutcomeClass::FS;
        else if (cells[4] == "fd") rec.cls = OutcomeClass::FD;
        else throw ConfigError("unknown outcome class: " + cells[4]);
        rec.sdc = cells[5] == "1";
        rec.sev.k = static_cast<std::uint32_t>(std::stoul(cells[6]));
        if (!cells[7].empty()) rec.sev.rmse = std::stod(cells[7]);
        rec.sev.nonfinite_count =
            static_cast<std::uint32_t>(std::stoul(cells[8]));
        records.push_back(std::move(rec));
    }
    return records;
}

std::string emit_scatter_csv(const std::vector<CampaignResult>& results) {
    std::string out = "label,avg_k,rmse_mean\n";
    for (const CampaignResult& r : results) {
        if (!r.avg_k || !r.rmse_stats) continue;
        out += r.key.label() + ',' + format_double(*r.avg_k) + ',' +
               format_double(r.rmse_stats->mean) + '\n';
    }
    return out;
}

namespace {

const char* precision_color(const std::string& name) {
    if (name == "fp32") return "#d62728";
    if (name == "fp16") return "#ff7f0e";
    if (name == "bp16") return "#2ca02c";
    if (name == "fp8") return "#1f77b4";
    return "#7f7f7f";
}

} // namespace

std::string emit_scatter_svg(const std::vector<CampaignResult>& results,
                             const std::string& title) {
    struct Point {
        double x, y;
        std::string label;
        const char* color;
    };
    std::vector<Point> pts;
    for (const CampaignResult& r : results) {
        if (!r.avg_k || !r.rmse_stats || r.rmse_stats->mean <= 0.0) continue;
        pts.push_back({*r.avg_k, r.rmse_stats->mean, r.key.label(),
                       precision_color(r.key.precision)});
    }

    const double width = 760, height = 520;
    const double ml = 90, mr = 180, mt = 50, mb = 70;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xlo = 0.0, xhi = 1.0;
    int dec_lo = 0, dec_hi = 1;
    if (!pts.empty()) {
        xlo = xhi = pts[0].x;
        double ylo = pts[0].y, yhi = pts[0].y;
        for (const Point& p : pts) {
            xlo = std::min(xlo, p.x);
            xhi = std::max(xhi, p.x);
            ylo = std::min(ylo, p.y);
            yhi = std::max(yhi, p.y);
        }
        const double pad = xhi > xlo ? 0.05 * (xhi - xlo) : 0.5;
        xlo -= pad;
        xhi += pad;
        dec_lo = static_cast<int>(std::floor(std::log10(ylo)));
        dec_hi = static_cast<int>(std::ceil(std::log10(yhi)));
        if (dec_hi <= dec_lo) dec_hi = dec_lo + 1;
    }

    auto sx = [&](double x) {
        return ml + (x - xlo) / (xhi - xlo) * pw;
    };
    auto sy = [&](double y) {
        const double t = (std::log10(y) - dec_lo) / (dec_hi - dec_lo);
        return mt + (1.0 - t) * ph;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           fmt_fixed(width, 0) + "\" height=\"" + fmt_fixed(height, 0) +
           "\" viewBox=\"0 0 " + fmt_fixed(width, 0) + ' ' +
           fmt_fixed(height, 0) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt_fixed(ml, 1) + "\" y=\"28\" font-family=\""
           "sans-serif\" font-size=\"16\">" + title + "</text>\n";

    svg += "<line x1=\"" + fmt_fixed(ml, 1) + "\" y1=\"" +
           fmt_fixed(mt + ph, 1) + "\" x2=\"" + fmt_fixed(ml + pw, 1) +
           "\" y2=\"" + fmt_fixed(mt + ph, 1) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt_fixed(ml, 1) + "\" y1=\"" + fmt_fixed(mt, 1) +
           "\" x2=\"" + fmt_fixed(ml, 1) + "\" y2=\"" + fmt_fixed(mt + ph, 1) +
           "\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        const double x = xlo + (xhi - xlo) * i / 4.0;
        const double px = sx(x);
        svg += "<line x1=\"" + fmt_fixed(px, 1) + "\" y1=\"" +
               fmt_fixed(mt + ph, 1) + "\" x2=\"" + fmt_fixed(px, 1) +
               "\" y2=\"" + fmt_fixed(mt + ph + 6, 1) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt_fixed(px, 1) + "\" y=\"" +
               fmt_fixed(mt + ph + 22, 1) + "\" font-family=\"sans-serif\" "
               "font-size=\"11\" text-anchor=\"middle\">" + fmt_sig(x, 3) +
               "</text>\n";
    }
    for (int d = dec_lo; d <= dec_hi; ++d) {
        const double py = sy(std::pow(10.0, d));
        svg += "<line x1=\"" + fmt_fixed(ml - 6, 1) + "\" y1=\"" +
               fmt_fixed(py, 1) + "\" x2=\"" + fmt_fixed(ml + pw, 1) +
               "\" y2=\"" + fmt_fixed(py, 1) +
               "\" stroke=\"#cccccc\" stroke-dasharray=\"3,3\"/>\n";
        svg += "<text x=\"" + fmt_fixed(ml - 10, 1) + "\" y=\"" +
               fmt_fixed(py + 4, 1) + "\" font-family=\"sans-serif\" "
               "font-size=\"11\" text-anchor=\"end\">1e" +
               std::to_string(d) + "</text>\n";
    }

    svg += "<text x=\"" + fmt_fixed(ml + pw / 2, 1) + "\" y=\"" +
           fmt_fixed(height - 18, 1) + "\" font-family=\"sans-serif\" "
           "font-size=\"13\" text-anchor=\"middle\">average corrupted "
           "outputs (K)</text>\n";
    svg += "<text x=\"24\" y=\"" + fmt_fixed(mt + ph / 2, 1) +
           "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 24 " +
           fmt_fixed(mt + ph / 2, 1) + ")\">mean RMSE</text>\n";

    for (const Point& p : pts) {
        const double px = sx(p.x), py = sy(p.y);
        svg += "<circle cx=\"" + fmt_fixed(px, 1) + "\" cy=\"" +
               fmt_fixed(py, 1) + "\" r=\"4\" fill=\"" + p.color +
               "\"/>\n";
        svg += "<text x=\"" + fmt_fixed(px + 7, 1) + "\" y=\"" +
               fmt_fixed(py + 4, 1) + "\" font-family=\"sans-serif\" "
               "font-size=\"10\">" + p.label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace vecfi
