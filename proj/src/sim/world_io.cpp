#include "modsim/sim/world_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "modsim/core/csv.hpp"

namespace modsim::sim {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(const TruncatedLogNormal& d) {
    return json{{"median_min", d.median_min},
                {"log_sigma", d.log_sigma},
                {"lo_min", d.lo_min},
                {"hi_min", d.hi_min}};
}

TruncatedLogNormal trunc_from_json(const json& j, const TruncatedLogNormal& dflt) {
    TruncatedLogNormal d = dflt;
    d.median_min = j.value("median_min", d.median_min);
    d.log_sigma = j.value("log_sigma", d.log_sigma);
    d.lo_min = j.value("lo_min", d.lo_min);
    d.hi_min = j.value("hi_min", d.hi_min);
    return d;
}

template <std::size_t N>
json arr_json(const double (&a)[N]) {
    json out = json::array();
    for (double v : a) out.push_back(v);
    return out;
}

template <std::size_t N>
void arr_from_json(const json& j, const char* key, double (&a)[N]) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != N) {
        throw std::invalid_argument(std::string(key) + " must be an array of " +
                                    std::to_string(N));
    }
    for (std::size_t i = 0; i < N; ++i) a[i] = v[i].get<double>();
}

json config_json(const ScenarioConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["mode"] = to_string(c.mode);
    j["window_start"] = c.window_start;
    j["window_end"] = c.window_end;
    j["n_pages"] = c.n_pages;
    j["posts_per_day_mean"] = c.posts_per_day_mean;
    j["posts_per_day_log_sigma"] = c.posts_per_day_log_sigma;
    j["audience_log_sigma"] = c.audience_log_sigma;
    j["partisan_weights"] = arr_json(c.partisan_weights);
    j["misinfo_prob"] = arr_json(c.misinfo_prob);
    j["body_log_mean"] = c.body_log_mean;
    j["body_log_sigma"] = c.body_log_sigma;
    j["viral_log_mean"] = c.viral_log_mean;
    j["viral_log_sigma"] = c.viral_log_sigma;
    j["viral_mix_prob"] = c.viral_mix_prob;
    j["engagement_scale"] = c.engagement_scale;
    j["tau_median_min"] = c.tau_median_min;
    j["tau_log_sigma"] = c.tau_log_sigma;
    j["tau_median_viral_min"] = c.tau_median_viral_min;
    j["tau_log_sigma_viral"] = c.tau_log_sigma_viral;
    j["shape_k"] = c.shape_k;
    j["removal_fraction"] = c.removal_fraction;
    j["viral_removal_multiplier"] = c.viral_removal_multiplier;
    j["misinfo_removal_multiplier"] = c.misinfo_removal_multiplier;
    j["delay_quick_weight"] = c.delay_quick_weight;
    j["delay_quick_median_min"] = c.delay_quick_median_min;
    j["delay_quick_log_sigma"] = c.delay_quick_log_sigma;
    j["delay_fast"] = to_json(c.delay_fast);
    j["delay_fast_viral"] = to_json(c.delay_fast_viral);
    j["delay_slow_weight"] = c.delay_slow_weight;
    j["delay_slow_median_min"] = c.delay_slow_median_min;
    j["delay_slow_log_sigma"] = c.delay_slow_log_sigma;
    j["voluntary_fraction"] = c.voluntary_fraction;
    j["voluntary_median_min"] = c.voluntary_median_min;
    j["voluntary_log_sigma"] = c.voluntary_log_sigma;
    j["policy_change_at"] = c.policy_change_at;
    j["retro_window"] = c.retro_window;
    j["retro_page_fraction"] = c.retro_page_fraction;
    j["retro_post_fraction"] = c.retro_post_fraction;
    j["retro_partisan_bias"] = arr_json(c.retro_partisan_bias);
    j["retro_jitter_median_min"] = c.retro_jitter_median_min;
    j["retro_jitter_log_sigma"] = c.retro_jitter_log_sigma;
    j["retro_jitter_max"] = c.retro_jitter_max;
    j["retro_min_age"] = c.retro_min_age;
    j["page_deletion_count"] = c.page_deletion_count;
    j["page_deletion_at"] = c.page_deletion_at;
    return j;
}

ScenarioConfig config_from_json(const json& j) {
    ScenarioConfig c;
    c.seed = j.value("seed", c.seed);
    if (j.contains("mode")) c.mode = scenario_mode_from_string(j.at("mode").get<std::string>());
    c.window_start = j.value("window_start", c.window_start);
    c.window_end = j.value("window_end", c.window_end);
    c.n_pages = j.value("n_pages", c.n_pages);
    c.posts_per_day_mean = j.value("posts_per_day_mean", c.posts_per_day_mean);
    c.posts_per_day_log_sigma = j.value("posts_per_day_log_sigma", c.posts_per_day_log_sigma);
    c.audience_log_sigma = j.value("audience_log_sigma", c.audience_log_sigma);
    arr_from_json(j, "partisan_weights", c.partisan_weights);
    arr_from_json(j, "misinfo_prob", c.misinfo_prob);
    c.body_log_mean = j.value("body_log_mean", c.body_log_mean);
    c.body_log_sigma = j.value("body_log_sigma", c.body_log_sigma);
    c.viral_log_mean = j.value("viral_log_mean", c.viral_log_mean);
    c.viral_log_sigma = j.value("viral_log_sigma", c.viral_log_sigma);
    c.viral_mix_prob = j.value("viral_mix_prob", c.viral_mix_prob);
    c.engagement_scale = j.value("engagement_scale", c.engagement_scale);
    c.tau_median_min = j.value("tau_median_min", c.tau_median_min);
    c.tau_log_sigma = j.value("tau_log_sigma", c.tau_log_sigma);
    c.tau_median_viral_min = j.value("tau_median_viral_min", c.tau_median_viral_min);
    c.tau_log_sigma_viral = j.value("tau_log_sigma_viral", c.tau_log_sigma_viral);
    c.shape_k = j.value("shape_k", c.shape_k);
    c.removal_fraction = j.value("removal_fraction", c.removal_fraction);
    c.viral_removal_multiplier = j.value("viral_removal_multiplier", c.viral_removal_multiplier);
    c.misinfo_removal_multiplier =
        j.value("misinfo_removal_multiplier", c.misinfo_removal_multiplier);
    c.delay_quick_weight = j.value("delay_quick_weight", c.delay_quick_weight);
    c.delay_quick_median_min = j.value("delay_quick_median_min", c.delay_quick_median_min);
    c.delay_quick_log_sigma = j.value("delay_quick_log_sigma", c.delay_quick_log_sigma);
    if (j.contains("delay_fast")) c.delay_fast = trunc_from_json(j.at("delay_fast"), c.delay_fast);
    if (j.contains("delay_fast_viral")) {
        c.delay_fast_viral = trunc_from_json(j.at("delay_fast_viral"), c.delay_fast_viral);
    }
    c.delay_slow_weight = j.value("delay_slow_weight", c.delay_slow_weight);
    c.delay_slow_median_min = j.value("delay_slow_median_min", c.delay_slow_median_min);
    c.delay_slow_log_sigma = j.value("delay_slow_log_sigma", c.delay_slow_log_sigma);
    c.voluntary_fraction = j.value("voluntary_fraction", c.voluntary_fraction);
    c.voluntary_median_min = j.value("voluntary_median_min", c.voluntary_median_min);
    c.voluntary_log_sigma = j.value("voluntary_log_sigma", c.voluntary_log_sigma);
    c.policy_change_at = j.value("policy_change_at", c.policy_change_at);
    c.retro_window = j.value("retro_window", c.retro_window);
    c.retro_page_fraction = j.value("retro_page_fraction", c.retro_page_fraction);
    c.retro_post_fraction = j.value("retro_post_fraction", c.retro_post_fraction);
    arr_from_json(j, "retro_partisan_bias", c.retro_partisan_bias);
    c.retro_jitter_median_min = j.value("retro_jitter_median_min", c.retro_jitter_median_min);
    c.retro_jitter_log_sigma = j.value("retro_jitter_log_sigma", c.retro_jitter_log_sigma);
    c.retro_jitter_max = j.value("retro_jitter_max", c.retro_jitter_max);
    c.retro_min_age = j.value("retro_min_age", c.retro_min_age);
    c.page_deletion_count = j.value("page_deletion_count", c.page_deletion_count);
    c.page_deletion_at = j.value("page_deletion_at", c.page_deletion_at);
    return c;
}

} // namespace

std::string scenario_to_json(const ScenarioConfig& cfg) {
    return config_json(cfg).dump(2) + "\n";
}

ScenarioConfig scenario_from_json(const std::string& text) {
    return config_from_json(json::parse(text));
}

void save_world(const World& world, const std::string& dir) {
    fs::create_directories(dir);

    {
        json meta;
        meta["version"] = core::kToolVersion;
        meta["config"] = config_json(world.config);
        std::ofstream out(fs::path(dir) / "world_meta.json");
        out << meta.dump(2) << "\n";
    }

    {
        std::ofstream out(fs::path(dir) / "pages.csv");
        out << core::file_header(world.config.seed) << "\n";
        out << "page_id,partisanship,misinformation,posts_per_day,audience_scale\n";
        for (const PageProfile& p : world.pages) {
            out << p.page_id << ',' << core::to_string(p.partisanship) << ','
                << (p.misinformation ? 1 : 0) << ',' << core::format_double(p.posts_per_day)
                << ',' << core::format_double(p.audience_scale) << "\n";
        }
    }

    {
        std::ofstream out(fs::path(dir) / "posts.ndjson");
        for (const PostRecord& p : world.posts) {
            json j;
            j["post_id"] = p.post_id;
            j["page_id"] = p.page_id;
            j["created_at"] = p.created_at;
            j["total_potential"] = p.curve.total_potential;
            j["tau"] = p.curve.tau;
            j["shape_k"] = p.curve.shape_k;
            j["split_seed"] = p.split_seed;
            if (p.removal) {
                j["removal"] = json{{"at", p.removal->at}, {"cause", to_string(p.removal->cause)}};
            } else {
                j["removal"] = nullptr;
            }
            out << j.dump() << "\n";
        }
    }
}

World load_world(const std::string& dir) {
    World world;

    {
        std::ifstream in(fs::path(dir) / "world_meta.json");
        if (!in) throw std::runtime_error("cannot open world_meta.json in " + dir);
        json meta = json::parse(in);
        world.config = config_from_json(meta.at("config"));
    }

    {
        std::ifstream in(fs::path(dir) / "pages.csv");
        if (!in) throw std::runtime_error("cannot open pages.csv in " + dir);
        std::string line;
        bool header_seen = false;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (!header_seen) {
                header_seen = true;
                continue;
            }
            const auto f = core::split_csv(line);
            if (f.size() != 5) throw std::runtime_error("bad pages.csv row: " + line);
            const auto page_id = core::parse_u64(f[0]);
            const auto misinfo = core::parse_i64(f[2]);
            const auto ppd = core::parse_f64(f[3]);
            const auto audience = core::parse_f64(f[4]);
            if (!page_id || !misinfo || !ppd || !audience)
                throw std::runtime_error("bad pages.csv row: " + line);
            PageProfile p;
            p.page_id = *page_id;
            p.partisanship = core::partisanship_from_string(std::string(f[1]));
            p.misinformation = *misinfo != 0;
            p.posts_per_day = *ppd;
            p.audience_scale = *audience;
            world.pages.push_back(p);
        }
    }

    {
        std::ifstream in(fs::path(dir) / "posts.ndjson");
        if (!in) throw std::runtime_error("cannot open posts.ndjson in " + dir);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            PostRecord p;
            p.post_id = j.at("post_id").get<std::uint64_t>();
            p.page_id = j.at("page_id").get<std::uint64_t>();
            p.created_at = j.at("created_at").get<SimTime>();
            p.curve.total_potential = j.at("total_potential").get<std::int64_t>();
            p.curve.tau = j.at("tau").get<double>();
            p.curve.shape_k = j.at("shape_k").get<double>();
            p.split_seed = j.at("split_seed").get<std::uint64_t>();
            if (!j.at("removal").is_null()) {
                RemovalEvent ev;
                ev.at = j.at("removal").at("at").get<SimTime>();
                ev.cause = removal_cause_from_string(j.at("removal").at("cause").get<std::string>());
                p.removal = ev;
            }
            world.posts.push_back(p);
        }
    }
    return world;
}

} // namespace modsim::sim
