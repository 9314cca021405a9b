#include "riskfrac/distribution_io.hpp"

#include "riskfrac/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace riskfrac {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

// Exact when the parsed rationals already sum to one; otherwise fall back
// to floating probabilities with the usual tolerance.
TradeDistribution from_rational_probs(std::vector<double> trades, std::vector<Rational> probs) {
    Rational sum = 0;
    for (const auto& p : probs) sum += p;
    if (sum == 1) return TradeDistribution::from_exact(std::move(trades), std::move(probs));
    std::vector<double> approx;
    approx.reserve(probs.size());
    for (const auto& p : probs) approx.push_back(to_double(p));
    return TradeDistribution::from_probabilities(std::move(trades), std::move(approx));
}

std::uint64_t parse_count(std::string_view text) {
    const Rational r = parse_rational(text);
    if (r <= 0 || denominator(r) != 1 || numerator(r) > BigInt(std::numeric_limits<std::uint64_t>::max())) {
        throw domain_error("trade counts must be positive integers, got '" + std::string(text) + "'");
    }
    return numerator(r).convert_to<std::uint64_t>();
}

} // namespace

TradeDistribution parse_distribution_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    bool have_header = false;
    bool counts_mode = false;
    std::vector<double> trades;
    std::vector<Rational> probs;
    std::vector<std::uint64_t> counts;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto fields = split_fields(stripped);
        if (!have_header) {
            if (fields.size() != 2 || fields[0] != "trade" || (fields[1] != "prob" && fields[1] != "count")) {
                throw domain_error("distribution CSV header must be 'trade,prob' or 'trade,count'");
            }
            counts_mode = fields[1] == "count";
            have_header = true;
            continue;
        }
        if (fields.size() != 2) {
            throw domain_error("distribution CSV line " + std::to_string(line_no) + ": expected 2 fields");
        }
        trades.push_back(to_double(parse_rational(fields[0])));
        if (counts_mode) {
            counts.push_back(parse_count(fields[1]));
        } else {
            probs.push_back(parse_rational(fields[1]));
        }
    }
    if (!have_header) throw domain_error("distribution CSV is empty");
    if (counts_mode) return TradeDistribution::from_counts(std::move(trades), counts);
    return from_rational_probs(std::move(trades), std::move(probs));
}

TradeDistribution parse_distribution_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw domain_error(std::string("distribution JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("trades") || !doc["trades"].is_array()) {
        throw domain_error("distribution JSON needs a \"trades\" array");
    }
    auto read_value = [](const nlohmann::json& v) -> Rational {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
        if (v.is_number()) {
            // Shortest round-trip decimal, so 0.25 stays exact.
            return parse_rational(nlohmann::json(v.get<double>()).dump());
        }
        throw domain_error("distribution JSON entries must be numbers or strings");
    };
    std::vector<double> trades;
    for (const auto& t : doc["trades"]) trades.push_back(to_double(read_value(t)));
    if (doc.contains("counts")) {
        std::vector<std::uint64_t> counts;
        for (const auto& c : doc["counts"]) counts.push_back(parse_count(to_string(read_value(c))));
        return TradeDistribution::from_counts(std::move(trades), counts);
    }
    if (!doc.contains("probs") || !doc["probs"].is_array()) {
        throw domain_error("distribution JSON needs a \"probs\" or \"counts\" array");
    }
    std::vector<Rational> probs;
    for (const auto& p : doc["probs"]) probs.push_back(read_value(p));
    return from_rational_probs(std::move(trades), std::move(probs));
}

TradeDistribution read_distribution(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw domain_error("cannot read distribution file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (path.extension() == ".json" || (first != std::string::npos && text[first] == '{')) {
        return parse_distribution_json(text);
    }
    return parse_distribution_csv(text);
}

} // namespace riskfrac
