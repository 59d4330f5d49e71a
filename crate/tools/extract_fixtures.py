#!/usr/bin/env python3
"""Transcribe the numeric tables of the source text into fixtures.json."""
import json, re, sys

src = open(sys.argv[1]).read().split("\n")

def lines(a, b):
    return "\n".join(src[a - 1:b])

def ints(s):
    return [int(re.sub(r"\s", "", x)) for x in re.findall(r"-\s*\d+|\d+", s)]

def array_body(text, start_pat=r"\\begin\s*\{array\}\{c+\}"):
    m = re.search(start_pat, text)
    e = text.index("\\end", m.end())
    return text[m.end():e]

def matrix(a, b, n):
    body = array_body(lines(a, b))
    body = body.replace("\\noalign{\\medskip}", "")
    body = body.replace("\n", "")
    rows = [r for r in body.split("\\\\") if r.strip()]
    m = [ints(r) for r in rows]
    assert len(m) == n and all(len(r) == n for r in m), (a, [len(r) for r in m])
    return m

def matrices_after(a, b, n, count):
    text = lines(a, b)
    out = []
    for m in re.finditer(r"\\begin\s*\{array\}\{c+\}", text):
        e = text.index("\\end", m.end())
        body = text[m.end():e].replace("\n", "")
        rows = [r for r in body.split("\\\\") if r.strip()]
        mm = [ints(r) for r in rows]
        assert len(mm) == n and all(len(r) == n for r in mm), [len(r) for r in mm]
        out.append(mm)
    assert len(out) == count
    return out

def vec20(a):
    """Two-line row vector starting at line a."""
    t = (src[a - 1].split("(", 1)[1] + src[a]).replace("\\phantom{).}", "")
    t = t.split(")")[0]
    v = ints(t)
    assert len(v) == 20, (a, len(v))
    return v

def polarizations(a, b, k):
    text = lines(a, b).split("\n")
    out = []
    i = 0
    while i < len(text):
        ln = text[i]
        m = re.match(r"\\(tl)?hki\{(\d)\}\{(\d+)\}\s*&=&\((.*)", ln)
        if m:
            tilde, kk, idx, rest = m.groups()
            assert int(kk) == k
            parts = rest.split("&&")
            first = ints(parts[0])
            sing, pair = parts[1].split("&")[:2]
            sing = sing.strip()
            pair = int(pair.strip().rstrip("\\").strip())
            second = ints(text[i + 1].split(")")[0])
            v = first + second
            assert len(v) == 20
            sing = re.sub(r"_\{(\d+)\}", r"\1", sing).replace(" ", "")
            out.append({"name": ("tlh" if tilde else "h") + f"{k}_{idx}", "k": k,
                        "h": v, "sing": sing, "pairing_with_ample": pair})
            i += 2
        else:
            i += 1
    return out

def row_list(a, b, n):
    out = []
    for ln in src[a - 1:b]:
        if ln.startswith("{(}"):
            v = ints(ln.replace("\\hskip -4pt", ""))
            assert len(v) == n
            out.append(v)
    return out

fx = {}
emb = []
text = lines(1477, 1503)
for m in re.finditer(r"\\begin \{array\}\{cccccccc\}(.*?)\\end", text, re.S):
    rows = [ints(r) for r in m.group(1).split("\\\\") if r.strip()]
    emb.append(rows)
assert len(emb) == 3
fx["embeddings_s1_s2"] = emb
amp = []
for a in (1576, 1578, 1580):
    t = src[a - 1].split("(", 1)[1] + src[a]
    v = ints(t.split(")")[0])
    assert len(v) == 20
    amp.append(v)
fx["ample"] = amp
fx["enriques_involution_x0"] = matrix(2323, 2351, 20)
fx["order4_x0"] = matrix(2352, 2380, 20)
fx["symplectic_involution_x1"] = matrix(2552, 2580, 20)
fx["double_plane_tlh0_3"] = matrix(3058, 3086, 20)
fx["polarizations"] = polarizations(2381, 2427, 0) + polarizations(2468, 2513, 1) + polarizations(2515, 2551, 2)
fx["enriques_basis"] = [ints(src[i - 1].split(":=(", 1)[1].replace("\\hskip -4pt", "")) for i in range(2979, 2989)]
assert all(len(r) == 20 for r in fx["enriques_basis"])
fx["enriques_gram"] = matrix(2994, 3013, 10)
names = ["order4", "double_plane_h0_1", "double_plane_h0_2", "double_plane_h0_3", "double_plane_tlh0_3"]
fx["enriques_generators"] = dict(zip(names, matrices_after(3087, 3153, 10, 5)))
fx["enriques_orbit_large"] = row_list(3154, 3192, 10)
fx["enriques_orbit_small"] = row_list(3193, 3211, 10)
assert len(fx["enriques_orbit_large"]) == 30 and len(fx["enriques_orbit_small"]) == 10
fx["quartic_h"] = vec20(2603)
fx["nef_wall_x0_twice"] = vec20(2763)
fx["nef_wall_x1_twice"] = vec20(2838)
fx["h_sigma_x1"] = vec20(2846)
fx["h_prime_x2"] = vec20(2934)
fx["h_second_x2"] = vec20(2936)
# quartic model: node incidence and diagonal blocks are stated in prose, the
# off-diagonal blocks are read from the table of named cyclic matrices
cyc = {int(a): ints(b) for a, b in re.findall(r"C_(\d)\s*:=\\mathord\{\\rm cyc\}\(([-\d,]+)\)", lines(2690, 2702))}
assert sorted(cyc) == list(range(1, 10))
diag = {0: [-2, 0, 1, 0], 1: [-2, 0, 1, 0], 4: [-2, 0, 1, 0], 5: [-2, 0, 1, 0], 6: [-2, 0, 1, 0],
        7: [-2, 0, 1, 0], 2: [-2, 1, 0, 1], 3: [-2, 0, 0, 0], 8: [-2, 0, 0, 0]}
rows = []
for i, line in enumerate(lines(2709, 2716).split("\n")):
    names = [int(x) for x in re.findall(r"C_\{(\d)\}", line)]
    assert len(names) == 8 - i, (i, names)
    rows.append([diag[i]] + [cyc[n] for n in names])
rows.append([diag[8]])
# nodes: orbit 0 is [p0..p3], orbit 1 is [q0, q1]
line_nodes = [[], [], [[1, 0]], [[1, 0]], [[0, 0]], [[0, 0]], [[0, 0]], [[0, 0]], [[0, 0], [1, 1]]]
fx["quartic_pattern"] = {"node_orbit_sizes": [4, 2], "line_nodes": line_nodes, "rows": rows}

# orbit decomposition of the walls of the base chamber, per surface
orbit_table = {}
k = None
for line in lines(404, 445).split("\n"):
    m = re.match(r"k=(\d)", line)
    if m:
        k = m.group(1)
        orbit_table[k] = []
        continue
    m = re.match(r"\\orbstablerow\{o(\\sp\\prime)?_\{(\d+)\}\}\{(\d+)\}\{([-\d/]+)\}\{(\d+)\}\{([^}]*)\}\{([^}]*)\}", line)
    if not m:
        continue
    prime, idx, size, nu, alpha, inv, pair = m.groups()
    row = {"label": "o" + idx + ("'" if prime else ""), "size": int(size), "norm": nu, "ample_pairing": int(alpha)}
    if inv:
        total, parts = inv.split("=")
        row["involutions"] = [int(total)] + [int(x) for x in parts.split("+")]
        row["ample_image_pairing"] = int(pair)
    orbit_table[k].append(row)
assert [len(orbit_table[k]) for k in "012"] == [13, 14, 8], {k: len(v) for k, v in orbit_table.items()}
fx["orbit_table"] = orbit_table

def class_table(a, b):
    text = lines(a, b)
    orders = ints(re.search(r"\\textrm\{order\}(.*?)\\\\", text, re.S).group(1))
    cards = ints(re.search(r"\\textrm\{card\.\}(.*)", text, re.S).group(1).split("\\end")[0])
    assert len(orders) == len(cards)
    return [[o, c] for o, c in zip(orders, cards)]

fx["class_tables"] = {
    "surface0": class_table(2272, 2276),
    "surface1_2": class_table(2437, 2441),
    "enriques": class_table(3050, 3054),
}
for name, t in fx["class_tables"].items():
    print(name, t)

def decimal(x, key=None):
    """Integers become decimal strings, except small structural indices."""
    if isinstance(x, dict):
        keep = ("k", "node_orbit_sizes", "line_nodes", "size", "norm", "class_tables", "involutions", "label")
        return {k: (v if k in keep else decimal(v, k)) for k, v in x.items()}
    if isinstance(x, list):
        return [decimal(v) for v in x]
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    return x

fx = {"schema_version": 1, **decimal(fx)}
json.dump(fx, open(sys.argv[2], "w"), indent=None, separators=(",", ":"))
print({k: (len(v) if hasattr(v, "__len__") else v) for k, v in fx.items()})
print(fx["quartic_pattern"]["rows"])
for p in fx["polarizations"]:
    print(p["name"], p["sing"], p["pairing_with_ample"])
