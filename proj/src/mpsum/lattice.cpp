// Copyright 2026 The mpsum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpsum/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <stdexcept>

#include "json.hpp"

namespace mpsum {

const char *to_string(Boundary b) {
    return b == Boundary::rotated ? "rotated" : "planar";
}

const char *to_string(Pauli p) {
    switch (p) {
        case Pauli::I:
            return "I";
        case Pauli::X:
            return "X";
        case Pauli::Y:
            return "Y";
        case Pauli::Z:
            return "Z";
    }
    return "?";
}

const char *to_string(LogicalClass c) {
    switch (c) {
        case LogicalClass::I:
            return "I";
        case LogicalClass::X:
            return "X";
        case LogicalClass::Z:
            return "Z";
        case LogicalClass::Y:
            return "Y";
    }
    return "?";
}

std::optional<Boundary> parse_boundary(std::string_view s) {
    if (s == "rotated") {
        return Boundary::rotated;
    }
    if (s == "planar" || s == "smooth_rough" || s == "smooth-rough") {
        return Boundary::smooth_rough;
    }
    return std::nullopt;
}

size_t PauliError::weight() const {
    size_t w = 0;
    for (size_t q = 0; q < x_bits.size(); q++) {
        w += (x_bits[q] | z_bits[q]) & 1;
    }
    return w;
}

Pauli PauliError::at(size_t q) const {
    static constexpr Pauli table[4] = {Pauli::I, Pauli::X, Pauli::Z, Pauli::Y};
    return table[(x_bits[q] & 1) | ((z_bits[q] & 1) << 1)];
}

void PauliError::set(size_t q, Pauli p) {
    x_bits[q] = p == Pauli::X || p == Pauli::Y;
    z_bits[q] = p == Pauli::Z || p == Pauli::Y;
}

void PauliError::apply(size_t q, Pauli p) {
    x_bits[q] ^= static_cast<uint8_t>(p == Pauli::X || p == Pauli::Y);
    z_bits[q] ^= static_cast<uint8_t>(p == Pauli::Z || p == Pauli::Y);
}

PauliError &PauliError::operator^=(const PauliError &other) {
    if (other.num_qubits() != num_qubits()) {
        throw std::invalid_argument("PauliError size mismatch");
    }
    for (size_t q = 0; q < x_bits.size(); q++) {
        x_bits[q] ^= other.x_bits[q];
        z_bits[q] ^= other.z_bits[q];
    }
    return *this;
}

bool Syndrome::any() const {
    return std::any_of(bits.begin(), bits.end(), [](uint8_t b) {
        return b != 0;
    });
}

int32_t StepGrid::step_qubit(int s, int t, int ds, int dt) const {
    if (ds == 1 && dt == 0) {
        return in_range(s, t) ? s_edge[index(s, t)] : -1;
    }
    if (ds == -1 && dt == 0) {
        return in_range(s - 1, t) ? s_edge[index(s - 1, t)] : -1;
    }
    if (ds == 0 && dt == 1) {
        return in_range(s, t) ? t_edge[index(s, t)] : -1;
    }
    if (ds == 0 && dt == -1) {
        return in_range(s, t - 1) ? t_edge[index(s, t - 1)] : -1;
    }
    return -1;
}

std::vector<uint32_t> CodeLayout::checks_of_kind(Pauli kind) const {
    std::vector<uint32_t> out;
    for (uint32_t c = 0; c < stabilisers.size(); c++) {
        if (stabilisers[c].kind == kind) {
            out.push_back(c);
        }
    }
    return out;
}

std::optional<uint32_t> CodeLayout::qubit_at(Coord c) const {
    for (uint32_t q = 0; q < qubits.size(); q++) {
        if (qubits[q] == c) {
            return q;
        }
    }
    return std::nullopt;
}

std::optional<uint32_t> CodeLayout::stabiliser_at(Coord c) const {
    for (uint32_t k = 0; k < stabilisers.size(); k++) {
        if (stabilisers[k].center == c) {
            return k;
        }
    }
    return std::nullopt;
}

namespace {

void init_grid(StepGrid &g, int width, int height) {
    g.width = width;
    g.height = height;
    size_t n = static_cast<size_t>(width) * static_cast<size_t>(height);
    g.check.assign(n, -1);
    g.exit_side.assign(n, 0);
    g.s_edge.assign(n, -1);
    g.t_edge.assign(n, -1);
    g.coord.assign(n, Coord{});
    g.valid.assign(n, 0);
    g.exit_distance.assign(n, -1);
}

void compute_exit_distances(StepGrid &g) {
    std::deque<GridPos> queue;
    for (int t = 0; t < g.height; t++) {
        for (int s = 0; s < g.width; s++) {
            size_t k = g.index(s, t);
            if (g.exit_side[k]) {
                g.exit_distance[k] = 0;
                queue.push_back({s, t});
            }
        }
    }
    static constexpr int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    while (!queue.empty()) {
        GridPos p = queue.front();
        queue.pop_front();
        int here = g.exit_distance[g.index(p.s, p.t)];
        for (const auto &dir : dirs) {
            if (g.step_qubit(p.s, p.t, dir[0], dir[1]) < 0) {
                continue;
            }
            int s2 = p.s + dir[0];
            int t2 = p.t + dir[1];
            size_t k2 = g.index(s2, t2);
            if (g.exit_distance[k2] < 0) {
                g.exit_distance[k2] = here + 1;
                queue.push_back({s2, t2});
            }
        }
    }
}

// Dense lookup of qubit index by coordinate, valid over [lo, hi]^2.
struct QubitIndex {
    int lo;
    int hi;
    std::vector<int32_t> table;

    QubitIndex(const std::vector<Coord> &qubits, int lo_, int hi_) : lo(lo_), hi(hi_) {
        int span = hi - lo + 1;
        table.assign(static_cast<size_t>(span) * static_cast<size_t>(span), -1);
        for (size_t q = 0; q < qubits.size(); q++) {
            table[slot(qubits[q].x, qubits[q].y)] = static_cast<int32_t>(q);
        }
    }
    size_t slot(int x, int y) const {
        return static_cast<size_t>(y - lo) * static_cast<size_t>(hi - lo + 1) + static_cast<size_t>(x - lo);
    }
    int32_t operator()(int x, int y) const {
        if (x < lo || y < lo || x > hi || y > hi) {
            return -1;
        }
        return table[slot(x, y)];
    }
};

void build_rotated(CodeLayout &layout) {
    const int d = layout.distance;
    for (int j = 0; j < d; j++) {
        for (int i = 0; i < d; i++) {
            layout.qubits.push_back({2 * i + 1, 2 * j + 1});
        }
    }
    auto qubit = [d](int i, int j) -> int32_t {
        if (i < 0 || j < 0 || i >= d || j >= d) {
            return -1;
        }
        return j * d + i;
    };

    // Tile (a, b) is centred at (2a, 2b); white (X) tiles have a + b even.
    std::vector<int32_t> tile_index(static_cast<size_t>((d + 1) * (d + 1)), -1);
    for (int b = 0; b <= d; b++) {
        for (int a = 0; a <= d; a++) {
            Pauli kind = (a + b) % 2 == 0 ? Pauli::X : Pauli::Z;
            bool interior = a >= 1 && a <= d - 1 && b >= 1 && b <= d - 1;
            bool half = kind == Pauli::X ? ((b == 0 || b == d) && a >= 1 && a <= d - 1)
                                         : ((a == 0 || a == d) && b >= 1 && b <= d - 1);
            if (!interior && !half) {
                continue;
            }
            Stabiliser st;
            st.kind = kind;
            st.center = {2 * a, 2 * b};
            for (auto [i, j] : {std::pair{a - 1, b - 1}, {a, b - 1}, {a - 1, b}, {a, b}}) {
                if (int32_t q = qubit(i, j); q >= 0) {
                    st.qubits.push_back(static_cast<uint32_t>(q));
                }
            }
            std::sort(st.qubits.begin(), st.qubits.end());
            tile_index[static_cast<size_t>(b * (d + 1) + a)] = static_cast<int32_t>(layout.stabilisers.size());
            layout.stabilisers.push_back(std::move(st));
        }
    }

    for (int i = 0; i < d; i++) {
        layout.logical_z.push_back(static_cast<uint32_t>(qubit(i, 0)));
    }
    for (int j = 0; j < d; j++) {
        layout.logical_x.push_back(static_cast<uint32_t>(qubit(d - 1, j)));
    }

    layout.stabiliser_pos.resize(layout.stabilisers.size());
    for (Pauli kind : {Pauli::X, Pauli::Z}) {
        const int par = kind == Pauli::Z ? 1 : 0;
        StepGrid &g = layout.grids[kind_slot(kind)];
        if (kind == Pauli::X) {
            init_grid(g, d + 1, d);
        } else {
            init_grid(g, d, d + 1);
        }
        for (int b = 0; b <= d; b++) {
            for (int a = 0; a <= d; a++) {
                if ((a + b) % 2 != par) {
                    continue;
                }
                int s = (a + b - par) / 2;
                int t = (a - b + d - 1 + par) / 2;
                size_t k = g.index(s, t);
                g.valid[k] = 1;
                g.coord[k] = {2 * a, 2 * b};
                int32_t tile = tile_index[static_cast<size_t>(b * (d + 1) + a)];
                if (tile >= 0) {
                    g.check[k] = tile;
                    layout.stabiliser_pos[static_cast<size_t>(tile)] = {s, t};
                } else if (kind == Pauli::Z && (b == 0 || b == d)) {
                    g.exit_side[k] = b == 0 ? 1 : 2;
                } else if (kind == Pauli::X && (a == 0 || a == d)) {
                    g.exit_side[k] = a == 0 ? 1 : 2;
                }
                g.s_edge[k] = qubit(a, b);
                g.t_edge[k] = qubit(a, b - 1);
            }
        }
        compute_exit_distances(g);
    }
}

void build_smooth_rough(CodeLayout &layout) {
    const int d = layout.distance;
    const int n = 2 * d - 1;
    for (int y = 0; y < n; y++) {
        for (int x = 0; x < n; x++) {
            if ((x + y) % 2 == 0) {
                layout.qubits.push_back({x, y});
            }
        }
    }
    QubitIndex qubit(layout.qubits, -1, n);

    std::vector<int32_t> site_index(static_cast<size_t>(n * n), -1);
    for (int y = 0; y < n; y++) {
        for (int x = 0; x < n; x++) {
            if ((x + y) % 2 == 0) {
                continue;
            }
            Stabiliser st;
            st.kind = x % 2 == 1 ? Pauli::Z : Pauli::X;
            st.center = {x, y};
            for (auto [dx, dy] : {std::pair{0, -1}, {-1, 0}, {1, 0}, {0, 1}}) {
                if (int32_t q = qubit(x + dx, y + dy); q >= 0) {
                    st.qubits.push_back(static_cast<uint32_t>(q));
                }
            }
            std::sort(st.qubits.begin(), st.qubits.end());
            site_index[static_cast<size_t>(y * n + x)] = static_cast<int32_t>(layout.stabilisers.size());
            layout.stabilisers.push_back(std::move(st));
        }
    }

    for (int x = 0; x < n; x += 2) {
        layout.logical_x.push_back(static_cast<uint32_t>(qubit(x, 0)));
    }
    for (int y = 0; y < n; y += 2) {
        layout.logical_z.push_back(static_cast<uint32_t>(qubit(n - 1, y)));
    }

    layout.stabiliser_pos.resize(layout.stabilisers.size());
    auto site = [&](int x, int y) -> int32_t {
        if (x < 0 || y < 0 || x >= n || y >= n) {
            return -1;
        }
        return site_index[static_cast<size_t>(y * n + x)];
    };
    for (Pauli kind : {Pauli::X, Pauli::Z}) {
        StepGrid &g = layout.grids[kind_slot(kind)];
        if (kind == Pauli::Z) {
            init_grid(g, d + 1, d);
        } else {
            init_grid(g, d, d + 1);
        }
        for (int t = 0; t < g.height; t++) {
            for (int s = 0; s < g.width; s++) {
                // Z sites: odd x in [-1, n], even y. X sites: even x, odd y in [-1, n].
                int x = kind == Pauli::Z ? 2 * s - 1 : 2 * s;
                int y = kind == Pauli::Z ? 2 * t : 2 * t - 1;
                size_t k = g.index(s, t);
                g.valid[k] = 1;
                g.coord[k] = {x, y};
                if (int32_t c = site(x, y); c >= 0) {
                    g.check[k] = c;
                    layout.stabiliser_pos[static_cast<size_t>(c)] = {s, t};
                } else if (kind == Pauli::Z) {
                    g.exit_side[k] = x < 0 ? 1 : 2;
                } else {
                    g.exit_side[k] = y < 0 ? 1 : 2;
                }
                g.s_edge[k] = qubit(x + 1, y);
                g.t_edge[k] = qubit(x, y + 1);
            }
        }
        compute_exit_distances(g);
    }
}

}  // namespace

CodeLayout build_layout(int distance, Boundary boundary) {
    if (distance < 3 || distance % 2 == 0) {
        throw std::invalid_argument("distance must be odd and >= 3, got " + std::to_string(distance));
    }
    CodeLayout layout;
    layout.distance = distance;
    layout.boundary = boundary;
    if (boundary == Boundary::rotated) {
        build_rotated(layout);
    } else {
        build_smooth_rough(layout);
    }
    return layout;
}

Syndrome extract_syndrome(const CodeLayout &layout, const PauliError &error) {
    if (error.num_qubits() != layout.num_qubits() || error.z_bits.size() != layout.num_qubits()) {
        throw std::invalid_argument(
            "error has " + std::to_string(error.num_qubits()) + " qubits but layout has " +
            std::to_string(layout.num_qubits()));
    }
    Syndrome out;
    out.bits.resize(layout.num_stabilisers());
    for (size_t c = 0; c < layout.stabilisers.size(); c++) {
        const Stabiliser &st = layout.stabilisers[c];
        const auto &plane = st.kind == Pauli::X ? error.z_bits : error.x_bits;
        uint8_t parity = 0;
        for (uint32_t q : st.qubits) {
            parity ^= plane[q];
        }
        out.bits[c] = parity & 1;
    }
    return out;
}

void extract_plane_syndrome(const CodeLayout &layout, Pauli component, std::span<const uint8_t> plane,
                            std::vector<uint8_t> &out) {
    const Pauli kind = detecting_kind(component);
    out.assign(layout.num_stabilisers(), 0);
    for (size_t c = 0; c < layout.stabilisers.size(); c++) {
        const Stabiliser &st = layout.stabilisers[c];
        if (st.kind != kind) {
            continue;
        }
        uint8_t parity = 0;
        for (uint32_t q : st.qubits) {
            parity ^= plane[q];
        }
        out[c] = parity & 1;
    }
}

TannerGraph tanner_graph(const CodeLayout &layout) {
    return tanner_graph(layout.num_qubits(), layout.stabilisers);
}

TannerGraph tanner_graph(size_t num_qubits, std::span<const Stabiliser> checks) {
    TannerGraph g;
    g.num_qubits = num_qubits;
    g.check_offsets.push_back(0);
    for (const Stabiliser &st : checks) {
        g.check_kind.push_back(st.kind);
        for (uint32_t q : st.qubits) {
            if (q >= num_qubits) {
                throw std::invalid_argument("check support names qubit " + std::to_string(q) + " out of range");
            }
            g.edge_qubit.push_back(q);
            g.edge_check.push_back(static_cast<uint32_t>(g.check_kind.size() - 1));
        }
        g.check_offsets.push_back(static_cast<uint32_t>(g.edge_qubit.size()));
    }
    std::vector<uint32_t> degree(g.num_qubits, 0);
    for (uint32_t q : g.edge_qubit) {
        degree[q]++;
    }
    g.qubit_offsets.assign(g.num_qubits + 1, 0);
    for (size_t q = 0; q < g.num_qubits; q++) {
        g.qubit_offsets[q + 1] = g.qubit_offsets[q] + degree[q];
    }
    g.qubit_edges.resize(g.edge_qubit.size());
    std::vector<uint32_t> fill(g.qubit_offsets.begin(), g.qubit_offsets.end() - 1);
    for (uint32_t e = 0; e < g.edge_qubit.size(); e++) {
        g.qubit_edges[fill[g.edge_qubit[e]]++] = e;
    }
    return g;
}

bool flips_logical(const CodeLayout &layout, Pauli component, std::span<const uint8_t> plane) {
    const auto &support = component == Pauli::X ? layout.logical_z : layout.logical_x;
    uint8_t parity = 0;
    for (uint32_t q : support) {
        parity ^= plane[q];
    }
    return (parity & 1) != 0;
}

LogicalClass logical_class(const CodeLayout &layout, const PauliError &residual) {
    if (extract_syndrome(layout, residual).any()) {
        throw std::invalid_argument("logical_class requires a residual with zero syndrome");
    }
    bool anti_z = flips_logical(layout, Pauli::X, residual.x_bits);
    bool anti_x = flips_logical(layout, Pauli::Z, residual.z_bits);
    if (anti_z && anti_x) {
        return LogicalClass::Y;
    }
    if (anti_z) {
        return LogicalClass::X;
    }
    if (anti_x) {
        return LogicalClass::Z;
    }
    return LogicalClass::I;
}

PauliError parse_error_spec(std::string_view spec, size_t num_qubits) {
    PauliError error(num_qubits);
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
            s.remove_prefix(1);
        }
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
            s.remove_suffix(1);
        }
        return s;
    };
    while (!spec.empty()) {
        size_t cut = spec.find(';');
        std::string_view item = trim(spec.substr(0, cut));
        spec = cut == std::string_view::npos ? std::string_view{} : spec.substr(cut + 1);
        if (item.empty()) {
            continue;
        }
        size_t colon = item.find(':');
        if (colon == std::string_view::npos || colon + 2 != item.size()) {
            throw std::invalid_argument("malformed error item '" + std::string(item) + "', expected qubit:P");
        }
        std::string_view index_text = trim(item.substr(0, colon));
        size_t q = 0;
        auto [ptr, ec] = std::from_chars(index_text.data(), index_text.data() + index_text.size(), q);
        if (ec != std::errc{} || ptr != index_text.data() + index_text.size() || index_text.empty()) {
            throw std::invalid_argument("malformed qubit index in '" + std::string(item) + "'");
        }
        if (q >= num_qubits) {
            throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range");
        }
        switch (item[colon + 1]) {
            case 'X':
                error.apply(q, Pauli::X);
                break;
            case 'Y':
                error.apply(q, Pauli::Y);
                break;
            case 'Z':
                error.apply(q, Pauli::Z);
                break;
            default:
                throw std::invalid_argument("unknown Pauli in '" + std::string(item) + "'");
        }
    }
    return error;
}

std::string layout_to_json(const CodeLayout &layout) {
    nlohmann::json j;
    j["distance"] = layout.distance;
    j["boundary"] = to_string(layout.boundary);
    auto &qubits = j["qubits"] = nlohmann::json::array();
    for (const Coord &c : layout.qubits) {
        qubits.push_back({c.x, c.y});
    }
    auto &stabs = j["stabilisers"] = nlohmann::json::array();
    for (const Stabiliser &st : layout.stabilisers) {
        stabs.push_back({{"kind", to_string(st.kind)}, {"center", {st.center.x, st.center.y}}, {"qubits", st.qubits}});
    }
    j["logical_x"] = layout.logical_x;
    j["logical_z"] = layout.logical_z;
    return j.dump(2);
}

}  // namespace mpsum
