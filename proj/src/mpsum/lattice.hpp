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

#ifndef MPSUM_LATTICE_HPP
#define MPSUM_LATTICE_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mpsum {

enum class Boundary : uint8_t { rotated, smooth_rough };

/// Single-qubit Pauli labels. The numeric order I, X, Y, Z is the order used
/// by every 4-component distribution in the library.
enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

enum class LogicalClass : uint8_t { I, X, Z, Y };

const char *to_string(Boundary b);
const char *to_string(Pauli p);
const char *to_string(LogicalClass c);
std::optional<Boundary> parse_boundary(std::string_view s);

/// The stabiliser kind that detects errors of component `component`
/// (X-kind stabilisers detect z bits and vice versa).
constexpr Pauli detecting_kind(Pauli component) {
    return component == Pauli::X ? Pauli::Z : Pauli::X;
}
constexpr size_t kind_slot(Pauli kind) {
    return kind == Pauli::X ? 0 : 1;
}

struct Coord {
    int x = 0;
    int y = 0;
    auto operator<=>(const Coord &) const = default;
};

struct Stabiliser {
    Pauli kind = Pauli::X;
    std::vector<uint32_t> qubits;
    Coord center;
};

/// Symplectic error record: one x bit and one z bit per qubit.
struct PauliError {
    std::vector<uint8_t> x_bits;
    std::vector<uint8_t> z_bits;

    PauliError() = default;
    explicit PauliError(size_t num_qubits) : x_bits(num_qubits, 0), z_bits(num_qubits, 0) {
    }

    size_t num_qubits() const {
        return x_bits.size();
    }
    size_t weight() const;
    Pauli at(size_t q) const;
    void set(size_t q, Pauli p);
    /// Multiplies qubit q by p (bitwise XOR of the symplectic planes).
    void apply(size_t q, Pauli p);
    std::vector<uint8_t> &plane(Pauli component) {
        return component == Pauli::X ? x_bits : z_bits;
    }
    const std::vector<uint8_t> &plane(Pauli component) const {
        return component == Pauli::X ? x_bits : z_bits;
    }

    PauliError &operator^=(const PauliError &other);
    friend PauliError operator^(PauliError a, const PauliError &b) {
        a ^= b;
        return a;
    }
    bool operator==(const PauliError &) const = default;
};

struct Syndrome {
    std::vector<uint8_t> bits;

    size_t size() const {
        return bits.size();
    }
    bool any() const;
    bool operator==(const Syndrome &) const = default;
};

/// Matching lattice for one stabiliser kind. Every position is a
/// stabiliser of that kind, a virtual exit beyond the boundary through
/// which an error chain can leave, or empty. Unit steps in s or t cross
/// exactly one qubit. Steps are "diagonal" on the rotated layout and
/// axis-aligned on the smooth/rough layout; this grid hides the difference.
struct StepGrid {
    int width = 0;   // s in [0, width)
    int height = 0;  // t in [0, height)
    std::vector<int32_t> check;      // stabiliser index or -1
    std::vector<uint8_t> exit_side;  // 0 = not an exit, otherwise 1 or 2
    std::vector<int32_t> s_edge;     // qubit crossed by (s,t) -> (s+1,t), or -1
    std::vector<int32_t> t_edge;     // qubit crossed by (s,t) -> (s,t+1), or -1
    std::vector<Coord> coord;        // layout coordinate of each position
    std::vector<uint8_t> valid;
    std::vector<int32_t> exit_distance;  // BFS steps to the nearest exit, -1 if unreachable

    size_t index(int s, int t) const {
        return static_cast<size_t>(t) * static_cast<size_t>(width) + static_cast<size_t>(s);
    }
    bool in_range(int s, int t) const {
        return s >= 0 && t >= 0 && s < width && t < height;
    }
    /// Qubit crossed by the unit step between neighbouring positions, or -1.
    int32_t step_qubit(int s, int t, int ds, int dt) const;
};

struct GridPos {
    int s = 0;
    int t = 0;
    bool operator==(const GridPos &) const = default;
};

struct CodeLayout {
    int distance = 0;
    Boundary boundary = Boundary::rotated;
    std::vector<Coord> qubits;
    std::vector<Stabiliser> stabilisers;
    std::vector<uint32_t> logical_x;  // support of the X-type logical string
    std::vector<uint32_t> logical_z;  // support of the Z-type logical string
    std::array<StepGrid, 2> grids;    // indexed by kind_slot(kind)
    std::vector<GridPos> stabiliser_pos;  // position of each stabiliser in its kind's grid

    size_t num_qubits() const {
        return qubits.size();
    }
    size_t num_stabilisers() const {
        return stabilisers.size();
    }
    const StepGrid &grid(Pauli kind) const {
        return grids[kind_slot(kind)];
    }
    /// Stabiliser indices of the given kind, in increasing order.
    std::vector<uint32_t> checks_of_kind(Pauli kind) const;
    std::optional<uint32_t> qubit_at(Coord c) const;
    std::optional<uint32_t> stabiliser_at(Coord c) const;
};

/// Builds a distance-d layout. Qubits are indexed row-major from the bottom
/// left. On the rotated layout, qubit (i, j) sits at (2i+1, 2j+1) and tiles
/// are centred on even points; on the smooth/rough layout qubits sit on the
/// even-parity points of a (2d-1)^2 grid and stabilisers on the odd ones.
CodeLayout build_layout(int distance, Boundary boundary);

Syndrome extract_syndrome(const CodeLayout &layout, const PauliError &error);

/// Syndrome bits of one stabiliser kind only, for a single error plane.
/// Used on the decode hot path; `out` is resized to num_stabilisers().
void extract_plane_syndrome(const CodeLayout &layout, Pauli component, std::span<const uint8_t> plane,
                            std::vector<uint8_t> &out);

struct TannerGraph {
    size_t num_qubits = 0;
    std::vector<Pauli> check_kind;
    std::vector<uint32_t> check_offsets;  // CSR, size num_checks + 1
    std::vector<uint32_t> edge_qubit;     // grouped by check
    std::vector<uint32_t> edge_check;
    std::vector<uint32_t> qubit_offsets;  // CSR, size num_qubits + 1
    std::vector<uint32_t> qubit_edges;    // edge ids grouped by qubit

    size_t num_checks() const {
        return check_kind.size();
    }
    size_t num_edges() const {
        return edge_qubit.size();
    }
    size_t check_degree(size_t c) const {
        return check_offsets[c + 1] - check_offsets[c];
    }
    size_t qubit_degree(size_t q) const {
        return qubit_offsets[q + 1] - qubit_offsets[q];
    }
};

TannerGraph tanner_graph(const CodeLayout &layout);
/// Tanner graph of an arbitrary check list (only kind and qubits are read).
TannerGraph tanner_graph(size_t num_qubits, std::span<const Stabiliser> checks);

/// Logical class of a residual with zero syndrome. Throws if the residual
/// has a nonzero syndrome.
LogicalClass logical_class(const CodeLayout &layout, const PauliError &residual);

/// Anticommutation of one plane of a residual with the matching logical:
/// the x plane is tested against logical_z, the z plane against logical_x.
bool flips_logical(const CodeLayout &layout, Pauli component, std::span<const uint8_t> plane);

/// Parses "q:P;q:P" into an error on a layout with n qubits.
PauliError parse_error_spec(std::string_view spec, size_t num_qubits);

std::string layout_to_json(const CodeLayout &layout);

}  // namespace mpsum

#endif
