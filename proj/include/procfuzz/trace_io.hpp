#pragma once

#include "procfuzz/program.hpp"
#include "procfuzz/trace.hpp"

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

namespace procfuzz {

// External text formats. Both are UTF-8 with LF line endings and round-trip
// losslessly; serialization is byte-stable for equal inputs.
//
// Trace log:
//   procfuzz-trace v1
//   selection <name> <csr>,<csr>,...
//   core 0: <priv> 0x<pc> (0x<encoding>) <disasm> [<v0>,<v1>,...] [x<rd> 0x<v>] [trap=<cause>]
//   ...
//   end <exit|max-retired|double-trap|fetch-escape>
//
// Program file:
//   procfuzz-program v1
//   .prologue / .body / .epilogue section markers, one instruction per line.

namespace io_detail {

inline char priv_digit(PrivMode p) { return p == PrivMode::Machine ? '3' : p == PrivMode::Supervisor ? '1' : '0'; }

inline std::optional<PrivMode> priv_from_digit(char c) {
    switch (c) {
    case '3': return PrivMode::Machine;
    case '1': return PrivMode::Supervisor;
    case '0': return PrivMode::User;
    default: return std::nullopt;
    }
}

inline bool parse_hex(std::string_view s, u64 &out) {
    if (s.empty()) return false;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out, 16);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

inline bool parse_dec(std::string_view s, i64 &out) {
    if (s.empty()) return false;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out, 10);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    return lines;
}

} // namespace io_detail

inline std::string serialize_log(const ExtendedTraceLog &log) {
    std::string out = "procfuzz-trace v1\nselection " + log.selection_name + " ";
    for (size_t i = 0; i < log.monitored.size(); ++i) {
        if (i) out += ',';
        out += csr_info(log.monitored[i]).name;
    }
    out += '\n';
    for (const auto &e : log.entries) {
        out += "core 0: ";
        out += io_detail::priv_digit(e.priv);
        out += " 0x" + to_hex(e.pc, 16) + " (0x" + to_hex(e.encoding, 8) + ") ";
        out += disassemble(e.instr);
        out += " [";
        for (size_t i = 0; i < e.csr_snapshot.size(); ++i) {
            if (i) out += ',';
            out += to_hex(e.csr_snapshot[i], csr_info(log.monitored[i]).hex_width);
        }
        out += ']';
        if (e.writeback)
            out += std::string(" ") + (e.writeback->fp ? "f" : "x") +
                   std::to_string(e.writeback->rd) + " 0x" + to_hex(e.writeback->value, 16);
        if (e.trap) out += std::string(" trap=") + trap_cause_name(*e.trap);
        out += '\n';
    }
    out += std::string("end ") + run_end_name(log.end) + "\n";
    return out;
}

inline ExtendedTraceLog parse_log(std::string_view text) {
    using namespace io_detail;
    auto lines = split_lines(text);
    if (lines.size() < 2 || lines[0] != "procfuzz-trace v1")
        throw ParseError(1, 1, "expected 'procfuzz-trace v1' header");

    ExtendedTraceLog log;
    {
        std::string_view l = lines[1];
        if (l.substr(0, 10) != "selection ")
            throw ParseError(2, 1, "expected 'selection <name> <csrs>'");
        size_t sp = l.find(' ', 10);
        if (sp == std::string_view::npos) throw ParseError(2, 10, "missing CSR list");
        log.selection_name = std::string(l.substr(10, sp - 10));
        std::string_view csrs = l.substr(sp + 1);
        size_t pos = 0;
        while (pos <= csrs.size() && !csrs.empty()) {
            size_t comma = csrs.find(',', pos);
            std::string name(csrs.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
            auto id = csr_from_name(name);
            if (!id) throw ParseError(2, sp + 2 + pos, "unknown CSR '" + name + "'");
            log.monitored.push_back(*id);
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }

    bool saw_end = false;
    for (size_t n = 2; n < lines.size(); ++n) {
        std::string_view l = lines[n];
        size_t lineno = n + 1;
        if (l.empty()) continue;
        if (l.substr(0, 4) == "end ") {
            auto end = run_end_from_name(std::string(l.substr(4)));
            if (!end) throw ParseError(lineno, 5, "unknown end marker");
            log.end = *end;
            saw_end = true;
            continue;
        }
        if (l.substr(0, 8) != "core 0: ")
            throw ParseError(lineno, 1, "expected 'core 0: ' entry prefix");

        ExtendedTraceEntry e;
        size_t p = 8;
        auto need = [&](bool ok, size_t col, const std::string &msg) {
            if (!ok) throw ParseError(lineno, col + 1, msg);
        };
        need(p < l.size(), p, "truncated entry");
        auto priv = priv_from_digit(l[p]);
        need(priv.has_value(), p, "bad privilege digit");
        e.priv = *priv;
        p += 1;
        need(l.substr(p, 3) == " 0x", p, "expected pc");
        u64 pc = 0;
        need(parse_hex(l.substr(p + 3, 16), pc), p + 3, "bad pc");
        e.pc = pc;
        p += 3 + 16;
        need(l.substr(p, 4) == " (0x", p, "expected encoding");
        u64 enc = 0;
        need(parse_hex(l.substr(p + 4, 8), enc), p + 4, "bad encoding");
        e.encoding = u32(enc);
        e.instr = decode(e.encoding);
        p += 4 + 8;
        need(l.substr(p, 2) == ") ", p, "expected ') '");
        p += 2;
        size_t bracket = l.find(" [", p);
        need(bracket != std::string_view::npos, p, "missing CSR bracket group");
        p = bracket + 2;
        size_t close = l.find(']', p);
        need(close != std::string_view::npos, p, "unterminated CSR bracket group");
        std::string_view vals = l.substr(p, close - p);
        if (!vals.empty()) {
            size_t pos = 0;
            for (;;) {
                size_t comma = vals.find(',', pos);
                std::string_view v =
                    vals.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
                u64 value = 0;
                need(parse_hex(v, value), p + pos, "bad CSR value");
                e.csr_snapshot.push_back(value);
                if (comma == std::string_view::npos) break;
                pos = comma + 1;
            }
        }
        need(e.csr_snapshot.size() == log.monitored.size(), p,
             "CSR count does not match the selection");
        p = close + 1;

        while (p < l.size()) {
            need(l[p] == ' ', p, "unexpected trailing text");
            p += 1;
            if (l.substr(p, 5) == "trap=") {
                auto cause = trap_cause_from_name(std::string(l.substr(p + 5)));
                need(cause.has_value(), p + 5, "unknown trap cause");
                e.trap = cause;
                p = l.size();
            } else if (l[p] == 'x' || l[p] == 'f') {
                bool fp = l[p] == 'f';
                size_t sp = l.find(' ', p);
                need(sp != std::string_view::npos, p, "truncated writeback");
                i64 rd = 0;
                need(parse_dec(l.substr(p + 1, sp - p - 1), rd) && rd >= 0 && rd < 32, p + 1,
                     "bad writeback register");
                need(l.substr(sp + 1, 2) == "0x", sp + 1, "expected writeback value");
                u64 value = 0;
                need(parse_hex(l.substr(sp + 3, 16), value), sp + 3, "bad writeback value");
                e.writeback = Writeback{fp, u8(rd), value};
                p = sp + 3 + 16;
            } else {
                throw ParseError(lineno, p + 1, "unexpected trailing text");
            }
        }
        log.entries.push_back(std::move(e));
    }
    if (!saw_end) throw ParseError(lines.size(), 1, "missing 'end' marker");
    return log;
}

/// Best-effort reader for plain Spike commit-log lines of the shape
/// `core   0: 3 0x<pc> (0x<insn>) <disasm>`; yields an entry with an empty
/// snapshot, for format validation only.
inline std::optional<ExtendedTraceEntry> parse_spike_commit_line(std::string_view line) {
    using namespace io_detail;
    size_t p = line.find("core");
    if (p == std::string_view::npos) return std::nullopt;
    p = line.find(':', p);
    if (p == std::string_view::npos) return std::nullopt;
    ++p;
    while (p < line.size() && line[p] == ' ') ++p;
    if (p >= line.size()) return std::nullopt;
    auto priv = priv_from_digit(line[p]);
    if (!priv) return std::nullopt;
    ExtendedTraceEntry e;
    e.priv = *priv;
    p = line.find("0x", p);
    if (p == std::string_view::npos) return std::nullopt;
    size_t end = line.find(' ', p);
    u64 pc = 0;
    if (!parse_hex(line.substr(p + 2, end - p - 2), pc)) return std::nullopt;
    e.pc = pc;
    p = line.find("(0x", end);
    if (p == std::string_view::npos) return std::nullopt;
    size_t close = line.find(')', p);
    if (close == std::string_view::npos) return std::nullopt;
    u64 enc = 0;
    if (!parse_hex(line.substr(p + 3, close - p - 3), enc)) return std::nullopt;
    e.encoding = u32(enc);
    e.instr = decode(e.encoding);
    return e;
}

// -------- program files --------

namespace io_detail {

inline std::vector<std::string> tokenize_operands(std::string_view rest) {
    std::vector<std::string> ops;
    std::string cur;
    for (char c : rest) {
        if (c == ',') {
            ops.push_back(cur);
            cur.clear();
        } else if (c != ' ' && c != '\t') {
            cur += c;
        }
    }
    if (!cur.empty()) ops.push_back(cur);
    return ops;
}

inline u8 parse_reg(const std::string &tok, char kind) {
    if (tok.size() < 2 || tok[0] != kind)
        throw AssembleError("expected " + std::string(1, kind) + "-register, got '" + tok + "'");
    i64 n = 0;
    if (!parse_dec(std::string_view(tok).substr(1), n) || n < 0 || n > 31)
        throw AssembleError("bad register '" + tok + "'");
    return u8(n);
}

inline i64 parse_imm_tok(const std::string &tok) {
    i64 v = 0;
    if (tok.size() > 2 && tok.substr(0, 2) == "0x") {
        u64 uv = 0;
        if (!parse_hex(std::string_view(tok).substr(2), uv))
            throw AssembleError("bad immediate '" + tok + "'");
        return i64(uv);
    }
    bool neg = !tok.empty() && tok[0] == '-';
    if (!parse_dec(neg ? std::string_view(tok).substr(1) : std::string_view(tok), v))
        throw AssembleError("bad immediate '" + tok + "'");
    return neg ? -v : v;
}

inline u16 parse_csr_tok(const std::string &tok) {
    if (tok == "fcsr") return kFcsrAddr;
    if (auto id = csr_from_name(tok)) return csr_info(*id).address;
    if (tok.size() > 2 && tok.substr(0, 2) == "0x") {
        u64 v = 0;
        if (parse_hex(std::string_view(tok).substr(2), v) && v < 0x1000) return u16(v);
    }
    throw AssembleError("unknown CSR '" + tok + "'");
}

inline u8 parse_rm_tok(const std::string &tok) {
    static constexpr const char *names[] = {"rne", "rtz", "rdn", "rup", "rmm", "rm5", "rm6"};
    for (u8 i = 0; i < 7; ++i)
        if (tok == names[i]) return i;
    throw AssembleError("unknown rounding mode '" + tok + "'");
}

inline std::pair<i64, u8> parse_mem_operand(const std::string &tok) {
    size_t open = tok.find('(');
    size_t close = tok.find(')', open);
    if (open == std::string::npos || close == std::string::npos)
        throw AssembleError("expected offset(base), got '" + tok + "'");
    i64 off = parse_imm_tok(tok.substr(0, open));
    u8 base = parse_reg(tok.substr(open + 1, close - open - 1), 'x');
    return {off, base};
}

} // namespace io_detail

/// Assembles one instruction line (the inverse of disassemble()).
inline Instruction assemble_line(const std::string &line) {
    using namespace io_detail;
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) throw AssembleError("empty instruction line");
    size_t sp = line.find(' ', start);
    std::string mn = line.substr(start, sp == std::string::npos ? sp : sp - start);
    auto m = mnemonic_from_text(mn);
    if (!m) throw AssembleError("unsupported mnemonic '" + mn + "'");
    auto ops = tokenize_operands(sp == std::string::npos ? "" : std::string_view(line).substr(sp));
    auto expect = [&](size_t lo, size_t hi) {
        if (ops.size() < lo || ops.size() > hi)
            throw AssembleError("wrong operand count for '" + mn + "'");
    };

    Instruction in;
    in.mnemonic = *m;
    switch (instr_class(*m)) {
    case InstrClass::System:
        expect(0, 0);
        return in;
    case InstrClass::Csr: {
        expect(3, 3);
        in.rd = parse_reg(ops[0], 'x');
        in.csr = parse_csr_tok(ops[1]);
        bool imm_form = *m == Mnemonic::Csrrwi || *m == Mnemonic::Csrrsi || *m == Mnemonic::Csrrci;
        if (imm_form) {
            i64 z = parse_imm_tok(ops[2]);
            if (z < 0 || z > 31) throw AssembleError("zimm out of range in '" + line + "'");
            in.rs1 = u8(z);
        } else {
            in.rs1 = parse_reg(ops[2], 'x');
        }
        return in;
    }
    case InstrClass::Fp: {
        in.rm = 7;
        switch (*m) {
        case Mnemonic::FmvWX:
            expect(2, 2);
            in.rm = 0;
            in.rd = parse_reg(ops[0], 'f');
            in.rs1 = parse_reg(ops[1], 'x');
            return in;
        case Mnemonic::FmvXW:
            expect(2, 2);
            in.rm = 0;
            in.rd = parse_reg(ops[0], 'x');
            in.rs1 = parse_reg(ops[1], 'f');
            return in;
        case Mnemonic::FsqrtS:
            expect(2, 3);
            in.rd = parse_reg(ops[0], 'f');
            in.rs1 = parse_reg(ops[1], 'f');
            if (ops.size() == 3) in.rm = parse_rm_tok(ops[2]);
            return in;
        default:
            expect(3, 4);
            in.rd = parse_reg(ops[0], 'f');
            in.rs1 = parse_reg(ops[1], 'f');
            in.rs2 = parse_reg(ops[2], 'f');
            if (ops.size() == 4) in.rm = parse_rm_tok(ops[3]);
            return in;
        }
    }
    default: break;
    }

    switch (*m) {
    case Mnemonic::Lui:
    case Mnemonic::Auipc:
        expect(2, 2);
        in.rd = parse_reg(ops[0], 'x');
        in.imm = parse_imm_tok(ops[1]) & 0xfffff;
        return in;
    case Mnemonic::Jal:
        expect(2, 2);
        in.rd = parse_reg(ops[0], 'x');
        in.imm = parse_imm_tok(ops[1]);
        return in;
    case Mnemonic::Jalr:
        expect(3, 3);
        in.rd = parse_reg(ops[0], 'x');
        in.rs1 = parse_reg(ops[1], 'x');
        in.imm = parse_imm_tok(ops[2]);
        return in;
    case Mnemonic::Beq:
    case Mnemonic::Bne:
    case Mnemonic::Blt:
    case Mnemonic::Bge:
    case Mnemonic::Bltu:
    case Mnemonic::Bgeu:
        expect(3, 3);
        in.rs1 = parse_reg(ops[0], 'x');
        in.rs2 = parse_reg(ops[1], 'x');
        in.imm = parse_imm_tok(ops[2]);
        return in;
    case Mnemonic::Lb:
    case Mnemonic::Lh:
    case Mnemonic::Lw:
    case Mnemonic::Ld:
    case Mnemonic::Lbu:
    case Mnemonic::Lhu:
    case Mnemonic::Lwu: {
        expect(2, 2);
        in.rd = parse_reg(ops[0], 'x');
        auto [off, base] = io_detail::parse_mem_operand(ops[1]);
        in.imm = off;
        in.rs1 = base;
        return in;
    }
    case Mnemonic::Sb:
    case Mnemonic::Sh:
    case Mnemonic::Sw:
    case Mnemonic::Sd: {
        expect(2, 2);
        in.rs2 = parse_reg(ops[0], 'x');
        auto [off, base] = io_detail::parse_mem_operand(ops[1]);
        in.imm = off;
        in.rs1 = base;
        return in;
    }
    case Mnemonic::Fence:
        if (ops.empty()) {
            in.imm = 0x0ff;
            return in;
        }
        expect(3, 3);
        in.imm = parse_imm_tok(ops[0]) & 0xfff;
        in.rd = parse_reg(ops[1], 'x');
        in.rs1 = parse_reg(ops[2], 'x');
        return in;
    default:
        expect(3, 3);
        in.rd = parse_reg(ops[0], 'x');
        in.rs1 = parse_reg(ops[1], 'x');
        switch (*m) {
        case Mnemonic::Addi:
        case Mnemonic::Slti:
        case Mnemonic::Sltiu:
        case Mnemonic::Xori:
        case Mnemonic::Ori:
        case Mnemonic::Andi:
        case Mnemonic::Slli:
        case Mnemonic::Srli:
        case Mnemonic::Srai:
        case Mnemonic::Addiw:
        case Mnemonic::Slliw:
        case Mnemonic::Srliw:
        case Mnemonic::Sraiw: in.imm = parse_imm_tok(ops[2]); return in;
        default: in.rs2 = parse_reg(ops[2], 'x'); return in;
        }
    }
}

inline std::string disassemble(const Program &prog) {
    std::string out = "procfuzz-program v1\n.prologue\n";
    for (const auto &in : prog.prologue) out += disassemble(in) + "\n";
    out += ".body\n";
    for (const auto &in : prog.body) out += disassemble(in) + "\n";
    out += ".epilogue\n";
    for (const auto &in : prog.epilogue) out += disassemble(in) + "\n";
    return out;
}

inline Program assemble(std::string_view text) {
    using namespace io_detail;
    auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "procfuzz-program v1")
        throw AssembleError("expected 'procfuzz-program v1' header");
    Program prog;
    std::vector<Instruction> *section = nullptr;
    for (size_t n = 1; n < lines.size(); ++n) {
        std::string line(lines[n]);
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        std::string_view body = std::string_view(line).substr(start);
        if (body == ".prologue") {
            section = &prog.prologue;
            continue;
        }
        if (body == ".body") {
            section = &prog.body;
            continue;
        }
        if (body == ".epilogue") {
            section = &prog.epilogue;
            continue;
        }
        if (!section)
            throw AssembleError("instruction before any section marker at line " +
                                std::to_string(n + 1));
        section->push_back(assemble_line(line));
    }
    return prog;
}

} // namespace procfuzz
