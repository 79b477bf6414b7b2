#include "qnos/circuit.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace qnos {

const char* gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "h";
        case GateKind::Cp: return "cp";
        case GateKind::Swap: return "swap";
        case GateKind::Cnot: return "cnot";
    }
    return "?";
}

bool is_two_qubit(GateKind kind) { return kind != GateKind::H; }

Rational::Rational(int n, int d) {
    if (d == 0) {
        throw std::invalid_argument("Rational: zero denominator");
    }
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const int g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : n;
    den = g ? d / g : d;
}

std::string to_string(const Rational& r) {
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

int DurationTable::of(GateKind kind) const {
    switch (kind) {
        case GateKind::H: return h;
        case GateKind::Cp: return cp;
        case GateKind::Swap: return swap;
        case GateKind::Cnot: return cnot;
    }
    return 1;
}

void DurationTable::validate() const {
    if (h < 1 || cp < 1 || swap < 1 || cnot < 1) {
        throw std::invalid_argument("DurationTable: all durations must be >= 1");
    }
}

namespace {

Gate make_gate(GateKind kind, std::vector<int> qubits, std::optional<Rational> angle, int duration) {
    Gate g;
    g.kind = kind;
    g.qubits = std::move(qubits);
    g.angle = angle;
    g.duration = duration;
    return g;
}

}  // namespace

Gate Gate::h(int q) { return make_gate(GateKind::H, {q}, std::nullopt, DurationTable{}.h); }

Gate Gate::cp(int control, int target, Rational angle) {
    return make_gate(GateKind::Cp, {control, target}, angle, DurationTable{}.cp);
}

Gate Gate::swap(int a, int b) { return make_gate(GateKind::Swap, {a, b}, std::nullopt, DurationTable{}.swap); }

Gate Gate::cnot(int control, int target) {
    return make_gate(GateKind::Cnot, {control, target}, std::nullopt, DurationTable{}.cnot);
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1) {
        throw std::invalid_argument("Circuit: needs at least one qubit");
    }
}

void Circuit::append(Gate gate) {
    const std::size_t expected = is_two_qubit(gate.kind) ? 2 : 1;
    if (gate.qubits.size() != expected) {
        throw std::invalid_argument(std::string("Circuit: ") + gate_kind_name(gate.kind) +
                                    " expects " + std::to_string(expected) + " qubit operand(s)");
    }
    for (int q : gate.qubits) {
        if (q < 0 || q >= num_qubits_) {
            throw std::out_of_range("Circuit: qubit " + std::to_string(q) + " out of range [0, " +
                                    std::to_string(num_qubits_) + ")");
        }
    }
    if (gate.qubits.size() == 2 && gate.qubits[0] == gate.qubits[1]) {
        throw std::invalid_argument("Circuit: gate qubits must be distinct");
    }
    if (gate.duration < 1) {
        throw std::invalid_argument("Circuit: gate duration must be >= 1");
    }
    gate.id = static_cast<int>(gates_.size());
    gates_.push_back(std::move(gate));
}

Circuit build_qft(int n) {
    if (n < 1) {
        throw std::invalid_argument("build_qft: n must be >= 1");
    }
    Circuit c(n);
    for (int i = 0; i < n; ++i) {
        c.append(Gate::h(i));
        for (int j = i + 1; j < n; ++j) {
            c.append(Gate::cp(j, i, Rational(1, 1 << (j - i))));
        }
    }
    for (int i = 0; i < n / 2; ++i) {
        c.append(Gate::swap(i, n - 1 - i));
    }
    return c;
}

Circuit decompose_swaps(const Circuit& c) {
    Circuit out(c.num_qubits());
    for (const Gate& g : c.gates()) {
        if (g.kind == GateKind::Swap) {
            const int a = g.qubits[0];
            const int b = g.qubits[1];
            out.append(Gate::cnot(a, b));
            out.append(Gate::cnot(b, a));
            out.append(Gate::cnot(a, b));
        } else {
            Gate copy = g;
            out.append(std::move(copy));
        }
    }
    return out;
}

CircuitDag to_dag(const Circuit& c) {
    CircuitDag dag;
    dag.num_gates = c.size();
    dag.num_qubits = c.num_qubits();
    // Frontier node per qubit, starting at the input sentinel.
    std::vector<int> frontier(static_cast<std::size_t>(c.num_qubits()));
    for (int q = 0; q < c.num_qubits(); ++q) {
        frontier[static_cast<std::size_t>(q)] = dag.input_node(q);
    }
    for (const Gate& g : c.gates()) {
        for (int q : g.qubits) {
            dag.edges.push_back({frontier[static_cast<std::size_t>(q)], g.id, q});
            frontier[static_cast<std::size_t>(q)] = g.id;
        }
    }
    for (int q = 0; q < c.num_qubits(); ++q) {
        dag.edges.push_back({frontier[static_cast<std::size_t>(q)], dag.output_node(q), q});
    }
    return dag;
}

std::vector<std::vector<int>> CircuitDag::successors() const {
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(node_count()));
    for (const DagEdge& e : edges) {
        succ[static_cast<std::size_t>(e.from)].push_back(e.to);
    }
    return succ;
}

std::vector<std::vector<int>> CircuitDag::predecessors() const {
    std::vector<std::vector<int>> pred(static_cast<std::size_t>(node_count()));
    for (const DagEdge& e : edges) {
        pred[static_cast<std::size_t>(e.to)].push_back(e.from);
    }
    return pred;
}

bool CircuitDag::is_acyclic() const {
    const auto succ = successors();
    std::vector<int> indegree(static_cast<std::size_t>(node_count()), 0);
    for (const DagEdge& e : edges) {
        ++indegree[static_cast<std::size_t>(e.to)];
    }
    std::vector<int> ready;
    for (int v = 0; v < node_count(); ++v) {
        if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    }
    int seen = 0;
    while (!ready.empty()) {
        const int v = ready.back();
        ready.pop_back();
        ++seen;
        for (int w : succ[static_cast<std::size_t>(v)]) {
            if (--indegree[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
        }
    }
    return seen == node_count();
}

GanttSchedule asap_schedule(const Circuit& c, const DurationTable& durations) {
    durations.validate();
    GanttSchedule sched;
    std::vector<int> frontier(static_cast<std::size_t>(c.num_qubits()), 0);
    for (const Gate& g : c.gates()) {
        int start = 0;
        for (int q : g.qubits) {
            start = std::max(start, frontier[static_cast<std::size_t>(q)]);
        }
        const int end = start + durations.of(g.kind);
        for (int q : g.qubits) {
            frontier[static_cast<std::size_t>(q)] = end;
        }
        sched.entries.push_back({g.id, start, end});
        sched.horizon = std::max(sched.horizon, end);
    }
    return sched;
}

std::vector<std::string> validate_gantt(const Circuit& c, const DurationTable& durations,
                                        const GanttSchedule& sched) {
    std::vector<std::string> violations;
    if (sched.entries.size() != static_cast<std::size_t>(c.size())) {
        violations.push_back("entry count " + std::to_string(sched.entries.size()) +
                             " does not match gate count " + std::to_string(c.size()));
        return violations;
    }
    std::vector<int> start_of(static_cast<std::size_t>(c.size()), -1);
    std::vector<int> end_of(static_cast<std::size_t>(c.size()), -1);
    for (const GanttEntry& e : sched.entries) {
        if (e.gate_id < 0 || e.gate_id >= c.size()) {
            violations.push_back("entry references unknown gate " + std::to_string(e.gate_id));
            continue;
        }
        const Gate& g = c.gate(e.gate_id);
        if (e.start < 0) {
            violations.push_back("gate " + std::to_string(e.gate_id) + " starts at negative time");
        }
        if (e.end - e.start != durations.of(g.kind)) {
            violations.push_back("gate " + std::to_string(e.gate_id) + " span " +
                                 std::to_string(e.end - e.start) + " != duration " +
                                 std::to_string(durations.of(g.kind)));
        }
        start_of[static_cast<std::size_t>(e.gate_id)] = e.start;
        end_of[static_cast<std::size_t>(e.gate_id)] = e.end;
    }
    // Per-qubit non-overlap, over all entry pairs.
    for (std::size_t i = 0; i < sched.entries.size(); ++i) {
        for (std::size_t j = i + 1; j < sched.entries.size(); ++j) {
            const GanttEntry& a = sched.entries[i];
            const GanttEntry& b = sched.entries[j];
            const Gate& ga = c.gate(a.gate_id);
            const Gate& gb = c.gate(b.gate_id);
            const bool share_qubit = std::any_of(ga.qubits.begin(), ga.qubits.end(), [&](int q) {
                return std::find(gb.qubits.begin(), gb.qubits.end(), q) != gb.qubits.end();
            });
            if (share_qubit && a.start < b.end && b.start < a.end) {
                violations.push_back("gates " + std::to_string(a.gate_id) + " and " +
                                     std::to_string(b.gate_id) + " overlap on a shared qubit");
            }
        }
    }
    // DAG precedence: every gate starts no earlier than all predecessor ends.
    const CircuitDag dag = to_dag(c);
    for (const DagEdge& e : dag.edges) {
        if (!dag.is_gate_node(e.from) || !dag.is_gate_node(e.to)) continue;
        if (start_of[static_cast<std::size_t>(e.to)] < end_of[static_cast<std::size_t>(e.from)]) {
            violations.push_back("gate " + std::to_string(e.to) + " starts before predecessor " +
                                 std::to_string(e.from) + " ends");
        }
    }
    for (const GanttEntry& e : sched.entries) {
        if (e.end > sched.horizon) {
            violations.push_back("gate " + std::to_string(e.gate_id) + " ends past the horizon");
        }
    }
    return violations;
}

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

int parse_int(const std::string& tok, int line, const char* what) {
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(line, std::string("expected ") + what + ", got '" + tok + "'");
    }
    if (pos != tok.size()) {
        throw ParseError(line, std::string("expected ") + what + ", got '" + tok + "'");
    }
    return value;
}

Rational parse_angle(const std::string& tok, int line) {
    const std::size_t slash = tok.find('/');
    if (slash == std::string::npos) {
        throw ParseError(line, "expected angle as <num>/<den>, got '" + tok + "'");
    }
    const int num = parse_int(tok.substr(0, slash), line, "angle numerator");
    const int den = parse_int(tok.substr(slash + 1), line, "angle denominator");
    if (den == 0) {
        throw ParseError(line, "angle denominator must be nonzero");
    }
    return Rational(num, den);
}

int parse_qubit(const std::string& tok, int line, int num_qubits) {
    const int q = parse_int(tok, line, "qubit index");
    if (q < 0 || q >= num_qubits) {
        throw ParseError(line, "qubit index " + std::to_string(q) + " out of range [0, " +
                                   std::to_string(num_qubits) + ")");
    }
    return q;
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::optional<Circuit> circuit;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& op = tokens[0];
        if (!circuit) {
            if (op != "qubits") {
                throw ParseError(line_no, "expected 'qubits <n>' header, got '" + op + "'");
            }
            if (tokens.size() != 2) {
                throw ParseError(line_no, "'qubits' takes exactly one argument");
            }
            const int n = parse_int(tokens[1], line_no, "qubit count");
            if (n < 1) {
                throw ParseError(line_no, "qubit count must be >= 1");
            }
            circuit.emplace(n);
            continue;
        }
        const int n = circuit->num_qubits();
        try {
            if (op == "h") {
                if (tokens.size() != 2) throw ParseError(line_no, "'h' takes one qubit");
                circuit->append(Gate::h(parse_qubit(tokens[1], line_no, n)));
            } else if (op == "cp") {
                if (tokens.size() != 4) throw ParseError(line_no, "'cp' takes control, target, angle");
                const int control = parse_qubit(tokens[1], line_no, n);
                const int target = parse_qubit(tokens[2], line_no, n);
                circuit->append(Gate::cp(control, target, parse_angle(tokens[3], line_no)));
            } else if (op == "swap") {
                if (tokens.size() != 3) throw ParseError(line_no, "'swap' takes two qubits");
                circuit->append(Gate::swap(parse_qubit(tokens[1], line_no, n),
                                           parse_qubit(tokens[2], line_no, n)));
            } else if (op == "cnot") {
                if (tokens.size() != 3) throw ParseError(line_no, "'cnot' takes control and target");
                circuit->append(Gate::cnot(parse_qubit(tokens[1], line_no, n),
                                           parse_qubit(tokens[2], line_no, n)));
            } else if (op == "qubits") {
                throw ParseError(line_no, "duplicate 'qubits' header");
            } else {
                throw ParseError(line_no, "unknown gate kind '" + op + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (!circuit) {
        throw ParseError(line_no, "missing 'qubits <n>' header");
    }
    return *std::move(circuit);
}

std::string serialize_circuit(const Circuit& c) {
    std::ostringstream out;
    out << "qubits " << c.num_qubits() << "\n";
    for (const Gate& g : c.gates()) {
        out << gate_kind_name(g.kind);
        for (int q : g.qubits) out << ' ' << q;
        if (g.kind == GateKind::Cp) out << ' ' << to_string(*g.angle);
        out << "\n";
    }
    return out.str();
}

}  // namespace qnos
