#include "toricmem/campaign.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "toricmem/decoder2d.h"
#include "toricmem/rng.h"

namespace toricmem {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string shortest(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8e", x);
    return buf;
}

double parse_double(const std::string &key, const std::string &text) {
    const std::string t = boost::trim_copy(text);
    double v = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw ConfigError("config key '" + key + "': not a number: '" + text + "'");
    }
    return v;
}

int64_t parse_int(const std::string &key, const std::string &text) {
    const std::string t = boost::trim_copy(text);
    int64_t v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw ConfigError("config key '" + key + "': not an integer: '" + text + "'");
    }
    return v;
}

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> parts;
    const std::string t = boost::trim_copy(text);
    if (t.empty()) {
        return parts;
    }
    boost::split(parts, t, boost::is_any_of(","));
    return parts;
}

uint64_t chunk_count(const CampaignConfig &cfg) {
    return (cfg.trials + cfg.chunk - 1) / cfg.chunk;
}

ChunkRecord run_unit(const CampaignConfig &cfg, int k, int p_index, uint64_t chunk) {
    ChunkRecord rec;
    rec.mode = cfg.mode;
    rec.k = k;
    rec.p_index = p_index;
    rec.chunk = chunk;
    rec.p = cfg.ps[p_index];
    rec.q = cfg.q.q_for(p_index, rec.p);
    const uint64_t begin = chunk * cfg.chunk;
    const uint64_t end = std::min(cfg.trials, begin + cfg.chunk);
    if (cfg.mode == CampaignMode::TwoD) {
        for (uint64_t i = begin; i < end; ++i) {
            rec.failures += run_trial(k, rec.p, derive_seed(cfg.seed, cfg.mode, k, p_index, i)) ? 1 : 0;
        }
        rec.trials = end - begin;
    } else {
        const FailureSample s = run_memory_simulation(k, rec.p, rec.q, end - begin,
                                                      derive_seed(cfg.seed, cfg.mode, k, p_index, chunk), cfg.decoder);
        rec.trials = s.trials;
        rec.failures = s.failures;
    }
    return rec;
}

nlohmann::ordered_json record_json(const ChunkRecord &r) {
    nlohmann::ordered_json j;
    j["mode"] = mode_name(r.mode);
    j["k"] = r.k;
    j["p_index"] = r.p_index;
    j["chunk"] = r.chunk;
    j["p"] = r.p;
    j["q"] = r.q;
    j["trials"] = r.trials;
    j["failures"] = r.failures;
    return j;
}

ChunkRecord record_from_json(const nlohmann::json &j) {
    ChunkRecord r;
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.k = j.at("k").get<int>();
    r.p_index = j.at("p_index").get<int>();
    r.chunk = j.at("chunk").get<uint64_t>();
    r.p = j.at("p").get<double>();
    r.q = j.at("q").get<double>();
    r.trials = j.at("trials").get<uint64_t>();
    r.failures = j.at("failures").get<uint64_t>();
    return r;
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("error reading " + path);
    }
    return ss.str();
}

}  // namespace

std::string mode_name(CampaignMode mode) {
    return mode == CampaignMode::TwoD ? "2d" : "3d";
}

CampaignMode parse_mode(const std::string &text) {
    const std::string t = boost::trim_copy(text);
    if (t == "2d") {
        return CampaignMode::TwoD;
    }
    if (t == "3d") {
        return CampaignMode::ThreeD;
    }
    throw ConfigError("mode must be 2d or 3d, got '" + text + "'");
}

double QRule::q_for(size_t p_index, double p) const {
    switch (kind) {
        case Ratio:
            return ratio * p;
        case List:
            return values.at(p_index);
        default:
            return 0.0;
    }
}

void CampaignConfig::validate() const {
    for (int k : ks) {
        if (k < 4) {
            throw ConfigError("every k must be at least 4");
        }
    }
    for (double p : ps) {
        if (!(p > 0.0 && p < 1.0)) {
            throw ConfigError("every p must lie in (0,1)");
        }
    }
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (chunk < 1) {
        throw ConfigError("chunk must be at least 1");
    }
    if (threads < 1) {
        throw ConfigError("threads must be at least 1");
    }
    if (mode == CampaignMode::TwoD && q.kind != QRule::Zero) {
        throw ConfigError("2d campaigns have no measurement errors; drop q and q_ratio");
    }
    if (mode == CampaignMode::ThreeD) {
        if (q.kind == QRule::List && q.values.size() != ps.size()) {
            throw ConfigError("q list must have one entry per p");
        }
        for (size_t i = 0; i < ps.size(); ++i) {
            const double qv = q.q_for(i, ps[i]);
            if (!(qv >= 0.0 && qv < 1.0)) {
                throw ConfigError("every q must lie in [0,1)");
            }
        }
        if (chunk <= static_cast<uint64_t>(std::max(0, decoder.warmup_rounds))) {
            throw ConfigError("3d chunk must exceed the warm-up rounds");
        }
        if (decoder.radius_steps < 1 || decoder.max_reinstatements < 0 || !(decoder.metric.alpha > 0.0)) {
            throw ConfigError("decoder needs radius_steps >= 1, max_reinstatements >= 0, alpha > 0");
        }
    }
}

CampaignConfig parse_config(const std::string &text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    static const std::vector<std::string> known = {
        "campaign.mode", "campaign.k", "campaign.p", "campaign.q", "campaign.q_ratio", "campaign.trials",
        "campaign.chunk", "campaign.seed", "campaign.threads", "decoder.alpha", "decoder.radius_steps",
        "decoder.warmup_rounds", "decoder.max_reinstatements", "decoder.reinstatement"};
    for (const auto &[section, body] : tree) {
        if (!body.data().empty()) {
            throw ConfigError("config key '" + section + "' is outside any section");
        }
        for (const auto &[key, value] : body) {
            const std::string full = section + "." + key;
            if (std::find(known.begin(), known.end(), full) == known.end()) {
                throw ConfigError("unknown config key '" + full + "'");
            }
        }
    }
    CampaignConfig cfg;
    cfg.mode = parse_mode(tree.get<std::string>("campaign.mode", "2d"));
    for (const auto &s : split_list(tree.get<std::string>("campaign.k", ""))) {
        cfg.ks.push_back(static_cast<int>(parse_int("campaign.k", s)));
    }
    for (const auto &s : split_list(tree.get<std::string>("campaign.p", ""))) {
        cfg.ps.push_back(parse_double("campaign.p", s));
    }
    const auto q_list = tree.get_optional<std::string>("campaign.q");
    const auto q_ratio = tree.get_optional<std::string>("campaign.q_ratio");
    if (q_list && q_ratio) {
        throw ConfigError("give either q or q_ratio, not both");
    }
    if (q_ratio) {
        cfg.q.kind = QRule::Ratio;
        cfg.q.ratio = parse_double("campaign.q_ratio", *q_ratio);
    } else if (q_list) {
        cfg.q.kind = QRule::List;
        for (const auto &s : split_list(*q_list)) {
            cfg.q.values.push_back(parse_double("campaign.q", s));
        }
    }
    const auto get_count = [&](const std::string &key, int64_t def) {
        const auto v = tree.get_optional<std::string>(key);
        const int64_t n = v ? parse_int(key, *v) : def;
        if (n < 0) {
            throw ConfigError("config key '" + key + "' must be non-negative");
        }
        return n;
    };
    cfg.trials = static_cast<uint64_t>(get_count("campaign.trials", 10000));
    cfg.chunk = static_cast<uint64_t>(get_count("campaign.chunk", cfg.mode == CampaignMode::TwoD ? 1000 : 20000));
    cfg.seed = static_cast<uint64_t>(get_count("campaign.seed", 1));
    cfg.threads = static_cast<int>(get_count("campaign.threads", 1));
    if (const auto v = tree.get_optional<std::string>("decoder.alpha")) {
        cfg.decoder.metric.alpha = parse_double("decoder.alpha", *v);
    }
    cfg.decoder.radius_steps = static_cast<int>(get_count("decoder.radius_steps", cfg.decoder.radius_steps));
    cfg.decoder.warmup_rounds = static_cast<int>(get_count("decoder.warmup_rounds", cfg.decoder.warmup_rounds));
    cfg.decoder.max_reinstatements =
        static_cast<int>(get_count("decoder.max_reinstatements", cfg.decoder.max_reinstatements));
    const std::string rule = boost::trim_copy(tree.get<std::string>("decoder.reinstatement", "likelihood"));
    if (rule == "likelihood") {
        cfg.decoder.reinstatement = ReinstatementRule::Likelihood;
    } else if (rule == "fixed") {
        cfg.decoder.reinstatement = ReinstatementRule::FixedCap;
    } else {
        throw ConfigError("decoder.reinstatement must be likelihood or fixed");
    }
    cfg.validate();
    return cfg;
}

CampaignConfig load_config(const std::string &path) {
    return parse_config(read_text_file(path));
}

std::string format_config(const CampaignConfig &cfg, bool include_threads) {
    std::ostringstream o;
    const auto join_d = [](const std::vector<double> &v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) {
            s += (i ? ", " : "") + shortest(v[i]);
        }
        return s;
    };
    o << "[campaign]\n";
    o << "mode = " << mode_name(cfg.mode) << "\n";
    o << "k = ";
    for (size_t i = 0; i < cfg.ks.size(); ++i) {
        o << (i ? ", " : "") << cfg.ks[i];
    }
    o << "\n";
    o << "p = " << join_d(cfg.ps) << "\n";
    if (cfg.q.kind == QRule::Ratio) {
        o << "q_ratio = " << shortest(cfg.q.ratio) << "\n";
    } else if (cfg.q.kind == QRule::List) {
        o << "q = " << join_d(cfg.q.values) << "\n";
    }
    o << "trials = " << cfg.trials << "\n";
    o << "chunk = " << cfg.chunk << "\n";
    o << "seed = " << cfg.seed << "\n";
    if (include_threads) {
        o << "threads = " << cfg.threads << "\n";
    }
    o << "\n[decoder]\n";
    o << "alpha = " << shortest(cfg.decoder.metric.alpha) << "\n";
    o << "radius_steps = " << cfg.decoder.radius_steps << "\n";
    o << "warmup_rounds = " << cfg.decoder.warmup_rounds << "\n";
    o << "max_reinstatements = " << cfg.decoder.max_reinstatements << "\n";
    o << "reinstatement = "
      << (cfg.decoder.reinstatement == ReinstatementRule::Likelihood ? "likelihood" : "fixed") << "\n";
    return o.str();
}

uint64_t derive_seed(uint64_t master_seed, CampaignMode mode, int k, int p_index, uint64_t trial_index) {
    uint64_t h = mix64(master_seed ^ 0x746f7269636d656dULL);
    h = mix64(h + static_cast<uint64_t>(mode));
    h = mix64(h + static_cast<uint64_t>(static_cast<uint32_t>(k)));
    h = mix64(h + static_cast<uint64_t>(static_cast<uint32_t>(p_index)));
    return mix64(h + trial_index);
}

ResultStore::ResultStore(std::string path) : path_(std::move(path)) {
}

void ResultStore::load() {
    records_.clear();
    needs_newline_ = false;
    if (!fs::exists(path_)) {
        return;
    }
    const std::string text = read_text_file(path_);
    size_t pos = 0;
    size_t line_no = 0;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        const bool last = end == std::string::npos;
        if (last) {
            end = text.size();
        }
        const std::string line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;
        if (boost::trim_copy(line).empty()) {
            continue;
        }
        try {
            const ChunkRecord r = record_from_json(nlohmann::json::parse(line));
            records_.emplace(r.key(), r);
        } catch (const std::exception &e) {
            if (last) {
                // Torn write from an interrupted run; the unit is simply redone.
                needs_newline_ = true;
                continue;
            }
            throw IoError(path_ + ":" + std::to_string(line_no) + ": bad record: " + e.what());
        }
    }
    if (!text.empty() && text.back() != '\n') {
        needs_newline_ = true;
    }
}

void ResultStore::append(const ChunkRecord &rec) {
    if (!records_.emplace(rec.key(), rec).second) {
        return;
    }
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (needs_newline_) {
        out << "\n";
        needs_newline_ = false;
    }
    out << record_json(rec).dump() << "\n";
    out.flush();
    if (!out) {
        records_.erase(rec.key());
        throw IoError("cannot append to " + path_);
    }
}

void ResultStore::compact() {
    std::string text;
    for (const auto &[key, rec] : records_) {
        text += record_json(rec).dump() + "\n";
    }
    write_text_file(path_, text);
    needs_newline_ = false;
}

std::vector<CellResult> collect_cells(const CampaignConfig &cfg, const ResultStore &store) {
    std::vector<CellResult> cells;
    const uint64_t total = chunk_count(cfg);
    for (int k : cfg.ks) {
        for (size_t i = 0; i < cfg.ps.size(); ++i) {
            CellResult c;
            c.mode = cfg.mode;
            c.k = k;
            c.p_index = static_cast<int>(i);
            c.p = cfg.ps[i];
            c.q = cfg.q.q_for(i, c.p);
            c.seed = derive_seed(cfg.seed, cfg.mode, k, c.p_index, 0);
            c.chunks_total = total;
            for (uint64_t ch = 0; ch < total; ++ch) {
                const auto it = store.records().find({static_cast<int>(cfg.mode), k, c.p_index, ch});
                if (it != store.records().end()) {
                    c.trials += it->second.trials;
                    c.failures += it->second.failures;
                    ++c.chunks_done;
                }
            }
            cells.push_back(c);
        }
    }
    return cells;
}

std::vector<CellResult> run_campaign(const CampaignConfig &cfg, const std::string &out_dir,
                                     const std::function<void(const ChunkRecord &)> &on_chunk) {
    cfg.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create " + out_dir + ": " + ec.message());
    }
    const std::string config_path = (fs::path(out_dir) / "config.ini").string();
    if (fs::exists(config_path)) {
        const CampaignConfig saved = load_config(config_path);
        if (format_config(saved, false) != format_config(cfg, false)) {
            throw ConfigError(out_dir + " holds a campaign with different settings");
        }
    }
    write_text_file(config_path, format_config(cfg));

    ResultStore store((fs::path(out_dir) / "store.ndjson").string());
    store.load();

    std::vector<ChunkRecord> todo;
    const uint64_t total = chunk_count(cfg);
    for (int k : cfg.ks) {
        for (size_t i = 0; i < cfg.ps.size(); ++i) {
            for (uint64_t ch = 0; ch < total; ++ch) {
                ChunkRecord r;
                r.mode = cfg.mode;
                r.k = k;
                r.p_index = static_cast<int>(i);
                r.chunk = ch;
                if (!store.has(r)) {
                    todo.push_back(r);
                }
            }
        }
    }

    std::atomic<size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex writer;
    std::exception_ptr error;
    const auto worker = [&] {
        while (!stop) {
            const size_t i = next++;
            if (i >= todo.size()) {
                return;
            }
            try {
                const ChunkRecord rec = run_unit(cfg, todo[i].k, todo[i].p_index, todo[i].chunk);
                std::lock_guard<std::mutex> lock(writer);
                store.append(rec);
                if (on_chunk) {
                    on_chunk(rec);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(writer);
                if (!error) {
                    error = std::current_exception();
                }
                stop = true;
            }
        }
    };
    const size_t n_threads = std::min<size_t>(static_cast<size_t>(cfg.threads), std::max<size_t>(todo.size(), 1));
    std::vector<std::thread> pool;
    for (size_t t = 1; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }

    store.compact();
    const auto cells = collect_cells(cfg, store);
    write_text_file((fs::path(out_dir) / "results.csv").string(), format_csv(cells));
    write_text_file((fs::path(out_dir) / "summary.json").string(), format_summary_json(cfg, cells));
    write_text_file((fs::path(out_dir) / "rates.tsv").string(), format_rates_tsv(cells));
    return cells;
}

std::vector<CellResult> resume_campaign(const std::string &out_dir, int threads,
                                        const std::function<void(const ChunkRecord &)> &on_chunk) {
    const std::string config_path = (fs::path(out_dir) / "config.ini").string();
    if (!fs::exists(config_path)) {
        throw IoError("no campaign to resume in " + out_dir);
    }
    CampaignConfig cfg = load_config(config_path);
    if (threads > 0) {
        cfg.threads = threads;
    }
    return run_campaign(cfg, out_dir, on_chunk);
}

double binomial_stderr(uint64_t trials, uint64_t failures) {
    if (trials == 0) {
        return 0.0;
    }
    const double r = static_cast<double>(failures) / static_cast<double>(trials);
    return std::sqrt(r * (1.0 - r) / static_cast<double>(trials));
}

std::string format_csv(const std::vector<CellResult> &cells) {
    std::string out = "mode,k,p,q,trials,failures,rate,stderr,seed\n";
    for (const auto &c : cells) {
        out += mode_name(c.mode) + "," + std::to_string(c.k) + "," + sci(c.p) + "," + sci(c.q) + "," +
               std::to_string(c.trials) + "," + std::to_string(c.failures) + "," + sci(c.rate()) + "," +
               sci(binomial_stderr(c.trials, c.failures)) + "," + std::to_string(c.seed) + "\n";
    }
    return out;
}

std::vector<FailureSample> read_campaign_csv(const std::string &path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || boost::trim_copy(line) != "mode,k,p,q,trials,failures,rate,stderr,seed") {
        throw ConfigError(path + ": not a campaign CSV");
    }
    std::vector<FailureSample> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (boost::trim_copy(line).empty()) {
            continue;
        }
        std::vector<std::string> f;
        boost::split(f, line, boost::is_any_of(","));
        if (f.size() != 9) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 9 fields");
        }
        FailureSample s;
        s.k = static_cast<int>(parse_int("k", f[1]));
        s.p = parse_double("p", f[2]);
        s.q = parse_double("q", f[3]);
        s.trials = static_cast<uint64_t>(parse_int("trials", f[4]));
        s.failures = static_cast<uint64_t>(parse_int("failures", f[5]));
        if (s.failures > s.trials) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": failures exceed trials");
        }
        out.push_back(s);
    }
    return out;
}

std::string format_summary_json(const CampaignConfig &cfg, const std::vector<CellResult> &cells) {
    nlohmann::ordered_json j;
    j["config"] = format_config(cfg);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &c : cells) {
        nlohmann::ordered_json e;
        e["mode"] = mode_name(c.mode);
        e["k"] = c.k;
        e["p"] = c.p;
        e["q"] = c.q;
        e["trials"] = c.trials;
        e["failures"] = c.failures;
        e["rate"] = c.rate();
        e["stderr"] = binomial_stderr(c.trials, c.failures);
        e["seed"] = c.seed;
        e["chunks_done"] = c.chunks_done;
        e["chunks_total"] = c.chunks_total;
        e["complete"] = c.complete();
        arr.push_back(e);
    }
    j["cells"] = arr;
    return j.dump(2) + "\n";
}

std::string format_rates_tsv(const std::vector<CellResult> &cells) {
    std::string out;
    int current = -1;
    for (const auto &c : cells) {
        if (c.failures == 0) {
            continue;
        }
        if (c.k != current) {
            if (current != -1) {
                out += "\n\n";
            }
            out += "# k=" + std::to_string(c.k) + "\n# p\trate\tstderr\n";
            current = c.k;
        }
        out += sci(c.p) + "\t" + sci(c.rate()) + "\t" + sci(binomial_stderr(c.trials, c.failures)) + "\n";
    }
    return out;
}

void write_text_file(const std::string &path, const std::string &text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        out.flush();
        if (!out) {
            throw IoError("cannot write " + tmp);
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
    }
}

}  // namespace toricmem
