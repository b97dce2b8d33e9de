#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "taut/workspace.hpp"

using namespace taut;

namespace {

// automata take an explicit state operand; expressions and machines do not
bool wants_state(const WsObject& o) { return o.kind == ObjKind::Automaton; }

void emit(const CmdResult& r, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << r.output;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << r.output;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coalgebraic automata toolkit"};
    app.require_subcommand(1);

    QueryOpts q;
    std::string format = "sexpr";
    app.add_option("--fuel", q.fuel, "step budget for machine runs and tau-closures")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-states", q.max_states, "state budget for determinization");
    app.add_option("--seed", q.seed, "seed for sampled validation probes");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"sexpr", "json"}));

    std::vector<std::string> acc_args;
    CLI::App* acc = app.add_subcommand("accept", "membership / weight query");
    acc->add_option("operands", acc_args, "FILE [STATE] WORD ('eps' = empty word)")
        ->expected(2, 3);

    std::vector<std::string> enum_args;
    int max_len = 6;
    CLI::App* enu = app.add_subcommand("enumerate", "accepted words in shortlex order");
    enu->add_option("operands", enum_args, "FILE [STATE]")->expected(1, 2);
    enu->add_option("--max-len", max_len, "maximum word length");

    std::vector<std::string> eq_args;
    std::string mode = "exact";
    int bound = 6;
    CLI::App* eqv = app.add_subcommand("equiv", "trace equivalence of two objects");
    eqv->add_option("operands", eq_args, "FILE1 [STATE1] FILE2 [STATE2]")->expected(2, 4);
    eqv->add_option("--mode", mode, "exact or bounded")->check(CLI::IsMember({"exact", "bounded"}));
    eqv->add_option("--bound", bound, "word-length bound for bounded mode");

    std::vector<std::string> conv_args;
    std::string out_path;
    CLI::App* conv = app.add_subcommand("convert", "convert between object kinds");
    conv->add_option("operands", conv_args,
                     "KIND FILE [ARGS]  (expr2aut aut2expr dpda2aut aut2dpda rdtm2aut "
                     "aut2rdtm dtm2rdtm cfg2algexpr)")
        ->expected(2, 4);
    conv->add_option("-o,--out", out_path, "write the converted object here (default stdout)");

    std::string check_file;
    CLI::App* chk = app.add_subcommand("check", "validate a file's invariants");
    chk->add_option("file", check_file, "object file")->required();

    for (CLI::App* s : {acc, enu, eqv, conv, chk}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }
    q.fuel_set = app.count("--fuel") > 0;
    q.json = format == "json";

    try {
        Workspace ws;
        std::map<std::string, Workspace::Key> loaded;  // path -> registry key
        auto load_obj = [&](const std::string& path) -> const WsObject& {
            auto it = loaded.find(path);
            if (it == loaded.end()) it = loaded.emplace(path, ws.load(path)).first;
            return ws.get(it->second);
        };
        CmdResult r;
        std::string write_to;
        if (*acc) {
            const WsObject& o = load_obj(acc_args[0]);
            std::optional<std::string> state;
            size_t i = 1;
            if (wants_state(o) && acc_args.size() == 3) state = acc_args[i++];
            if (i + 1 != acc_args.size())
                throw std::runtime_error("accept: expected FILE [STATE] WORD");
            r = cmd_accept(o, state, acc_args[i], q);
        } else if (*enu) {
            const WsObject& o = load_obj(enum_args[0]);
            std::optional<std::string> state;
            if (enum_args.size() == 2) state = enum_args[1];
            r = cmd_enumerate(o, state, max_len, q);
        } else if (*eqv) {
            size_t i = 0;
            auto pick = [&]() {
                if (i >= eq_args.size()) throw std::runtime_error("equiv: missing operand");
                const WsObject& o = load_obj(eq_args[i++]);
                std::optional<std::string> state;
                if (wants_state(o)) {
                    if (i >= eq_args.size())
                        throw std::runtime_error("equiv: automaton operand needs a state");
                    state = eq_args[i++];
                }
                return std::make_pair(&o, state);
            };
            auto [o1, s1] = pick();
            auto [o2, s2] = pick();
            if (i != eq_args.size()) throw std::runtime_error("equiv: too many operands");
            r = cmd_equiv(*o1, s1, *o2, s2, mode == "exact", bound, q);
        } else if (*conv) {
            const WsObject& o = load_obj(conv_args[1]);
            std::vector<std::string> extra(conv_args.begin() + 2, conv_args.end());
            r = cmd_convert(conv_args[0], o, extra, q);
            write_to = out_path;
        } else if (*chk) {
            r = cmd_check(load_obj(check_file), q);
        }
        emit(r, write_to);
        return r.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
