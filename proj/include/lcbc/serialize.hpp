// JSON wire formats. Matrices serialize column-major (the column span is the
// semantic object everywhere in this library); field elements serialize as
// q-ary integers whose base-p digits are the coefficient vector. Object keys
// come out sorted, so equal reports are byte-identical.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcbc/capacity.hpp"
#include "lcbc/decomposition.hpp"
#include "lcbc/instance.hpp"
#include "lcbc/oracle.hpp"
#include "lcbc/scheme.hpp"

namespace lcbc {

using json = nlohmann::json;

inline json matrix_to_json(const MatrixFq& m) {
    json cols = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
        json col = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) col.push_back(m.at(i, j));
        cols.push_back(std::move(col));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(cols)}};
}

inline MatrixFq matrix_from_json(const Field& f, const json& j, std::size_t expected_rows,
                                 const std::string& name) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw std::invalid_argument(name + ": matrix object needs rows, cols, data");
    const std::size_t rows = j.at("rows").get<std::size_t>();
    const std::size_t cols = j.at("cols").get<std::size_t>();
    if (rows != expected_rows)
        throw std::invalid_argument(name + ": has " + std::to_string(rows) + " rows, expected d = " +
                                    std::to_string(expected_rows));
    const json& data = j.at("data");
    if (!data.is_array() || data.size() != cols)
        throw std::invalid_argument(name + ": data must list exactly " + std::to_string(cols) + " columns");
    MatrixFq m(f, rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        const json& col = data.at(c);
        if (!col.is_array() || col.size() != rows)
            throw std::invalid_argument(name + ": column " + std::to_string(c) + " must have " +
                                        std::to_string(rows) + " entries");
        for (std::size_t r = 0; r < rows; ++r) {
            if (!col.at(r).is_number_unsigned() && !col.at(r).is_number_integer())
                throw std::invalid_argument(name + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                                            ") is not an integer");
            const std::int64_t v = col.at(r).get<std::int64_t>();
            if (v < 0 || !f->valid_code(static_cast<std::uint64_t>(v)))
                throw std::invalid_argument(name + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                                            ") = " + std::to_string(v) + " is outside [0, q) with q = " +
                                            std::to_string(f->order()));
            m.set(r, c, static_cast<std::uint64_t>(v));
        }
    }
    return m;
}

inline json instance_to_json(const LcbcInstance& inst) {
    json users = json::array();
    for (std::size_t k = 0; k < 3; ++k)
        users.push_back(json{{"V_prime", matrix_to_json(inst.user(k).side)},
                             {"V", matrix_to_json(inst.user(k).demand)}});
    return json{{"p", inst.field()->characteristic()},
                {"n", inst.field()->degree()},
                {"d", inst.d()},
                {"users", std::move(users)}};
}

inline LcbcInstance instance_from_json(const json& j) {
    for (const char* key : {"p", "n", "d", "users"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("instance: missing key '") + key + "'");
    const Field f = FieldSpec::make(j.at("p").get<std::uint32_t>(), j.at("n").get<std::uint32_t>());
    const std::size_t d = j.at("d").get<std::size_t>();
    const json& users = j.at("users");
    if (!users.is_array() || users.size() != 3)
        throw std::invalid_argument("instance: 'users' must list exactly 3 users (K = 3)");
    std::vector<UserMatrices> parsed;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::string base = "users[" + std::to_string(k) + "]";
        if (!users.at(k).contains("V_prime") || !users.at(k).contains("V"))
            throw std::invalid_argument(base + ": needs V_prime and V");
        parsed.push_back(UserMatrices{matrix_from_json(f, users.at(k).at("V_prime"), d, base + ".V_prime"),
                                      matrix_from_json(f, users.at(k).at("V"), d, base + ".V")});
    }
    return LcbcInstance(f, d, std::move(parsed));
}

inline LcbcInstance parse_instance(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("instance: malformed JSON: ") + e.what());
    }
    return instance_from_json(j);
}

inline std::string canonical_instance_text(const LcbcInstance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

inline json capacity_report_to_json(const CapacityReport& rep, const LcbcInstance& inst) {
    static const char* kPermNames[6] = {"123", "132", "213", "231", "312", "321"};
    json d1, d2;
    for (std::size_t i = 0; i < 6; ++i) {
        d1[kPermNames[i]] = rep.delta1[i].str();
        d2[kPermNames[i]] = rep.delta2[i].str();
    }
    return json{
        {"field", json{{"p", inst.field()->characteristic()}, {"n", inst.field()->degree()}, {"q", inst.field()->order()}}},
        {"d", inst.d()},
        {"m", json::array({rep.ranks.m1, rep.ranks.m2, rep.ranks.m3})},
        {"ranks",
         json{{"r123", rep.ranks.r123},
              {"r12", rep.ranks.r12},
              {"r13", rep.ranks.r13},
              {"r23", rep.ranks.r23},
              {"r12_13", rep.ranks.r12_13},
              {"r12_23", rep.ranks.r12_23},
              {"r13_23", rep.ranks.r13_23},
              {"r1_23", rep.ranks.r1_23},
              {"r2_13", rep.ranks.r2_13},
              {"r3_12", rep.ranks.r3_12}}},
        {"delta1", std::move(d1)},
        {"delta2", std::move(d2)},
        {"deltas",
         json{{"delta_1", rep.delta_single[0].str()},
              {"delta_2", rep.delta_single[1].str()},
              {"delta_3", rep.delta_single[2].str()},
              {"delta_12", rep.delta_pair[0].str()},
              {"delta_13", rep.delta_pair[1].str()},
              {"delta_23", rep.delta_pair[2].str()}}},
        {"delta_star", rep.delta_star.str()},
        {"c_star", rep.c_star ? json(rep.c_star->str()) : json("inf")},
        {"f_star", rep.f_star.str()},
        {"lambda",
         json{{"l123", rep.lambda.l123.str()},
              {"l12", rep.lambda.l12.str()},
              {"l13", rep.lambda.l13.str()},
              {"l23", rep.lambda.l23.str()},
              {"l", rep.lambda.l.str()}}},
        {"paths_agree", rep.paths_agree}};
}

inline json decomposition_to_json(const DecompositionBases& d) {
    const auto cols_list = [](const MatrixFq& m) {
        json cols = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            json col = json::array();
            for (std::size_t i = 0; i < m.rows(); ++i) col.push_back(m.at(i, j));
            cols.push_back(std::move(col));
        }
        return cols;
    };
    return json{{"B123", cols_list(d.b123)},   {"B12", cols_list(d.b12)},     {"B13", cols_list(d.b13)},
                {"B23", cols_list(d.b23)},     {"B1_23", cols_list(d.b1_23)}, {"B2_13", cols_list(d.b2_13)},
                {"B3_12", cols_list(d.b3_12)}, {"B1c", cols_list(d.b1c)},     {"B2c", cols_list(d.b2c)},
                {"B3c", cols_list(d.b3c)}};
}

inline json scheme_to_json(const BroadcastScheme& s) {
    json mixing{{"N123", matrix_to_json(s.n123)}, {"N12", matrix_to_json(s.n12)},
                {"N13", matrix_to_json(s.n13)},   {"N23", matrix_to_json(s.n23)},
                {"M12", matrix_to_json(s.m12)},   {"M13", matrix_to_json(s.m13)},
                {"M23", matrix_to_json(s.m23)},   {"M", matrix_to_json(s.m_mix)}};
    json decoders = json::array();
    for (std::size_t k = 0; k < 3; ++k)
        decoders.push_back(json{{"coords", matrix_to_json(s.decode_coeffs[k])},
                                {"side_columns_kept", s.base.reconstruction[k].side_columns_kept},
                                {"demand_coords", matrix_to_json(s.base.reconstruction[k].demand_coords)}});
    return json{{"l_prime", s.l_prime},
                {"z", s.z},
                {"L", s.batch()},
                {"extension_field",
                 json{{"p", s.emb.ext()->characteristic()}, {"n", s.emb.ext()->degree()}, {"q", s.emb.ext()->order()}}},
                {"lambda_scaled", json{{"l123", s.il123}, {"l12", s.il12}, {"l13", s.il13}, {"l23", s.il23}, {"l", s.il}}},
                {"t", json::array({s.t[0], s.t[1], s.t[2]})},
                {"generator", matrix_to_json(s.generator)},
                {"mixing", std::move(mixing)},
                {"decoders", std::move(decoders)},
                {"cost_per_computation", s.f_star.str()},
                {"seed", s.seed},
                {"attempts", s.attempts},
                {"z_used", s.z_used}};
}

inline json scheme_check_to_json(const SchemeCheck& c) {
    return json{{"determinants_nonzero", c.determinants_ok},
                {"cost_matches_objective", c.cost_ok},
                {"decode_exact", c.decode_ok},
                {"trials_run", c.trials_run},
                {"decode_failures", c.decode_failures},
                {"exhaustive", c.exhaustive},
                {"all_passed", c.all_passed()}};
}

}  // namespace lcbc
