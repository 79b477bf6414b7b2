#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnos {

enum class GateKind { H, Cp, Swap, Cnot };

const char* gate_kind_name(GateKind kind);
bool is_two_qubit(GateKind kind);

/// Rational multiple of pi. Stored reduced with den >= 1.
struct Rational {
    int num = 0;
    int den = 1;

    Rational() = default;
    Rational(int n, int d);

    friend bool operator==(const Rational&, const Rational&) = default;
};

std::string to_string(const Rational& r);

/// Gate durations in discrete time steps, by kind.
struct DurationTable {
    int h = 1;
    int cp = 2;
    int swap = 3;
    int cnot = 2;

    int of(GateKind kind) const;
    void validate() const;  // throws std::invalid_argument if any duration < 1
};

struct Gate {
    int id = -1;  // dense program-order index, assigned by Circuit::append
    GateKind kind = GateKind::H;
    std::vector<int> qubits;        // 1 entry for H, 2 otherwise; CP order is (control, target)
    std::optional<Rational> angle;  // CP only, as a multiple of pi
    int duration = 1;

    static Gate h(int q);
    static Gate cp(int control, int target, Rational angle);
    static Gate swap(int a, int b);
    static Gate cnot(int control, int target);

    friend bool operator==(const Gate&, const Gate&) = default;
};

/// Ordered gate list over a fixed qubit register.
class Circuit {
public:
    explicit Circuit(int num_qubits);

    /// Appends a gate, assigning the next dense id. Validates qubit indices.
    void append(Gate gate);

    int num_qubits() const { return num_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const Gate& gate(int id) const { return gates_.at(static_cast<std::size_t>(id)); }
    int size() const { return static_cast<int>(gates_.size()); }
    bool empty() const { return gates_.empty(); }

    friend bool operator==(const Circuit&, const Circuit&) = default;

private:
    int num_qubits_;
    std::vector<Gate> gates_;
};

/// Directed edge in a circuit DAG, labeled with the qubit it carries.
struct DagEdge {
    int from = 0;
    int to = 0;
    int qubit = 0;

    friend bool operator==(const DagEdge&, const DagEdge&) = default;
};

/// Precedence view of a circuit. Gate nodes are 0..num_gates-1; each qubit
/// also gets an input and an output sentinel node.
struct CircuitDag {
    int num_gates = 0;
    int num_qubits = 0;
    std::vector<DagEdge> edges;

    int node_count() const { return num_gates + 2 * num_qubits; }
    int input_node(int qubit) const { return num_gates + qubit; }
    int output_node(int qubit) const { return num_gates + num_qubits + qubit; }
    bool is_gate_node(int node) const { return node < num_gates; }

    std::vector<std::vector<int>> successors() const;
    std::vector<std::vector<int>> predecessors() const;
    bool is_acyclic() const;
};

struct GanttEntry {
    int gate_id = 0;
    int start = 0;
    int end = 0;

    friend bool operator==(const GanttEntry&, const GanttEntry&) = default;
};

/// Timed view of a circuit: one entry per gate, horizon = max end.
struct GanttSchedule {
    std::vector<GanttEntry> entries;
    int horizon = 0;
};

/// Textbook QFT on n qubits: per qubit an H followed by controlled-phase
/// rotations with halving angles, then the final qubit-reversal SWAPs.
Circuit build_qft(int n);

/// Replaces every SWAP(a,b) with the three-CNOT sequence CNOT(a,b),
/// CNOT(b,a), CNOT(a,b), reassigning dense ids.
Circuit decompose_swaps(const Circuit& c);

CircuitDag to_dag(const Circuit& c);

/// As-soon-as-possible schedule: each gate starts at the max frontier time
/// over its qubits, where the frontier is the end of the previous gate on
/// that qubit (0 initially).
GanttSchedule asap_schedule(const Circuit& c, const DurationTable& durations = {});

/// Independent Gantt checker: per-qubit non-overlap over all entry pairs,
/// duration consistency against the table, and DAG precedence.
std::vector<std::string> validate_gantt(const Circuit& c, const DurationTable& durations,
                                        const GanttSchedule& sched);

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

/// Parses the line-oriented circuit format:
///   qubits <n>
///   h <q> | cp <control> <target> <num>/<den> | swap <a> <b> | cnot <a> <b>
/// '#' starts a comment; blank lines are ignored.
Circuit parse_circuit(const std::string& text);

std::string serialize_circuit(const Circuit& c);

}  // namespace qnos
