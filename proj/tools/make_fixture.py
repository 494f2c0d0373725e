#!/usr/bin/env python3
# Copyright 2026 The litkg Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the bundled 50-abstract offline fixture under data/fixture/.

Layout:
  fixtures/search/<fnv1a64(query)>.json   search response (52 PMIDs)
  fixtures/annotations/<pmid>.txt         one PubTator block per PMID (50)
  corpus.pubtator                         all 50 blocks concatenated
  expected_stats.json                     counts tallied here, independently
  diet_lexicon.txt                        concept ids flagged as diet related

The abstracts are synthetic. Counting in this script does not share code
with the C++ implementation.
"""

import itertools
import json
import os
import random

DISEASES = [
    ("MESH:D000544", ["Alzheimer's disease", "Alzheimer disease", "AD"]),
    ("MESH:D010300", ["Parkinson's disease", "PD"]),
    ("MESH:D019636", ["neurodegenerative diseases"]),
    ("MESH:D003920", ["diabetes mellitus", "diabetes"]),
    ("MESH:D002318", ["cardiovascular diseases"]),
    ("MESH:D009765", ["obesity"]),
    ("MESH:D009369", ["cancer"]),
    ("MESH:D017096", ["prion disease"]),
    ("MESH:D006816", ["Huntington disease"]),
    ("MESH:D003643", ["cognitive decline"]),
]
CHEMICALS = [
    ("MESH:D059808", ["polyphenols"]),
    ("MESH:D008055", ["lipids"]),
    ("MESH:D015525", ["omega-3 fatty acids", "Omega-3"]),
    ("MESH:D003474", ["curcumin"]),
    ("MESH:D015032", ["zinc"]),
    ("MESH:D008315", ["malondialdehyde"]),
    ("MESH:D009538", ["nicotine"]),
    ("MESH:D013831", ["thiamine"]),
    ("MESH:D002110", ["caffeine"]),
    ("MESH:D000077185", ["resveratrol"]),
]
GENES = [
    ("351", ["Abeta", "amyloid beta"]),
    ("4137", ["tau"]),
    ("3630", ["insulin"]),
    ("348", ["ApoE", "Apo-E"]),
    ("43", ["AChE"]),
    ("6622", ["alpha-synuclein"]),
]
SPECIES = [
    ("9606", ["patients", "participants"]),
    ("4146", ["Olea europaea", "olive"]),
    ("136217", ["Curcuma longa"]),
    ("4054", ["Panax ginseng"]),
    ("10090", ["mice"]),
]
MUTATIONS = [
    ("SNP", "rs429358", "rs429358"),
    ("ProteinMutation", "p|SUB|C|112|R", "C112R"),
    ("DNAMutation", "c|SUB|G|209|A", "G209A"),
]
POOLS = [("Disease", DISEASES), ("Chemical", CHEMICALS), ("Gene", GENES), ("Species", SPECIES)]
DIET_LEXICON = [
    "Chemical:MESH:D059808", "Chemical:MESH:D015525", "Chemical:MESH:D003474",
    "Chemical:MESH:D015032", "Chemical:MESH:D013831", "Chemical:MESH:D000077185",
    "Species:4146", "Species:136217", "Species:4054",
]

FILLERS = [
    "Dietary patterns were assessed in a cohort study.",
    "We reviewed randomized controlled trials published to date.",
    "Results suggest a protective association.",
    "Further research is required to establish causality.",
    "Intake was measured with a food frequency questionnaire.",
]


def fnv1a64(data: bytes) -> int:
    h = 14695981039346656037
    for b in data:
        h ^= b
        h = (h * 1099511628211) & 0xFFFFFFFFFFFFFFFF
    return h


def make_doc(rng, pmid, index):
    """Returns (title, body, annotations) where annotations are tuples
    (start, end, surface, rawtype, rawid); offsets count code points over
    title + ' ' + body."""
    picks = []
    if index % 17 != 5:  # a few abstracts mention no disease at all
        for cid, forms in rng.sample(DISEASES, rng.choice([1, 1, 2, 2, 3])):
            picks.append(("Disease", cid, rng.choice(forms)))
    for rawtype, pool in POOLS[1:]:
        for cid, forms in rng.sample(pool, rng.choice([0, 1, 1, 2])):
            picks.append((rawtype, cid, rng.choice(forms)))
    if index % 9 == 0:
        rawtype, rawid, surface = MUTATIONS[(index // 9) % len(MUTATIONS)]
        picks.append((rawtype, rawid, surface))
    extras = []
    if index % 11 == 3:
        extras.append(("CellLine", "CVCL_0030", "HeLa"))
    if index % 13 == 7:
        extras.append(("Chemical", "-", "dietary supplement"))

    title_pick = picks[0] if picks else None
    title = "Diet and %s: a review" % (title_pick[2] if title_pick else "healthy ageing")
    annotations = []
    if title_pick:
        start = len("Diet and ")
        annotations.append((start, start + len(title_pick[2]), title_pick[2], title_pick[0], title_pick[1]))

    body = ""
    offset = len(title) + 1
    mentions = picks[1:] + extras
    rng.shuffle(mentions)
    for rawtype, rawid, surface in mentions:
        lead = rng.choice(["Levels of ", "The role of ", "Exposure to ", "Studies of "])
        sentence = lead + surface + " were evaluated. "
        s = offset + len(body) + len(lead)
        annotations.append((s, s + len(surface), surface, rawtype, rawid))
        body += sentence
    # Repeat the title mention in the body now and then (same concept twice).
    if title_pick and index % 4 == 1:
        lead = "Again, "
        s = offset + len(body) + len(lead)
        annotations.append((s, s + len(title_pick[2]), title_pick[2], title_pick[0], title_pick[1]))
        body += lead + title_pick[2] + " was discussed. "
    body += rng.choice(FILLERS)
    return title, body, annotations


def main():
    root = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "fixture")
    rng = random.Random(20210601)
    pmids = [str(31000000 + 137 * i) for i in range(52)]
    missing = {pmids[10], pmids[40]}
    docs = []
    for i, pmid in enumerate(pmids):
        if pmid in missing:
            continue
        docs.append((pmid,) + make_doc(rng, pmid, i))
    assert len(docs) == 50

    os.makedirs(os.path.join(root, "fixtures", "search"), exist_ok=True)
    os.makedirs(os.path.join(root, "fixtures", "annotations"), exist_ok=True)

    query = ("(Alzheimer's disease OR Parkinson's disease OR Prion disease OR Huntington disease"
             " OR neurodegenerative disease) AND (eat OR diet OR food)")
    key = "%016x" % fnv1a64(query.encode())
    search = {
        "retrieved_at": "2021-06-01T00:00:00Z",
        "esearchresult": {"count": str(len(pmids) + 1), "idlist": pmids + [pmids[3]]},
    }
    with open(os.path.join(root, "fixtures", "search", key + ".json"), "w") as f:
        json.dump(search, f, indent=1)
        f.write("\n")

    blocks = []
    for pmid, title, body, anns in docs:
        lines = ["%s|t|%s" % (pmid, title), "%s|a|%s" % (pmid, body)]
        for s, e, surface, rawtype, rawid in anns:
            lines.append("\t".join([pmid, str(s), str(e), surface, rawtype, rawid]))
        block = "\n".join(lines) + "\n"
        blocks.append(block)
        with open(os.path.join(root, "fixtures", "annotations", pmid + ".txt"), "w") as f:
            f.write(block)
    with open(os.path.join(root, "corpus.pubtator"), "w") as f:
        f.write("\n".join(blocks))

    # Independent tally.
    category = {"Disease": "Disease", "Chemical": "Chemical", "Gene": "Gene", "Species": "Species",
                "SNP": "SnpMutation", "DNAMutation": "SnpMutation", "ProteinMutation": "SnpMutation"}
    concept_cat = {}
    pair_pmids = {}
    for pmid, _, _, anns in docs:
        present = {}
        for _, _, _, rawtype, rawid in anns:
            if rawtype not in category or rawid == "-":
                continue
            cat = category[rawtype]
            present[cat + ":" + rawid] = cat
        concept_cat.update(present)
        for a, b in itertools.permutations(present, 2):
            if present[a] != "Disease":
                continue
            if present[b] == "Disease":
                key2 = (min(a, b), max(a, b))
            else:
                key2 = (a, b)
            pair_pmids.setdefault(key2, set()).add(pmid)
    in_graph = {c for pair in pair_pmids for c in pair}
    cats = ["Disease", "Chemical", "Gene", "Species", "SnpMutation"]
    rel = {"Chemical": "disease-chemical", "Gene": "disease-gene", "Species": "disease-species",
           "SnpMutation": "disease-snp-mutation", "Disease": "disease-disease"}
    relation_counts = {r: 0 for r in rel.values()}
    snp_pmids = set()
    for (a, b), ps in pair_pmids.items():
        relation_counts[rel[concept_cat[b]]] += 1
        if concept_cat[b] == "SnpMutation":
            snp_pmids |= ps
    expected = {
        "abstracts": len(docs),
        "nodes": {c: sum(1 for x in in_graph if concept_cat[x] == c) for c in cats},
        "concepts": {c: sum(1 for x in concept_cat if concept_cat[x] == c) for c in cats},
        "relations": relation_counts,
        "edges": len(pair_pmids),
        "snp_disease_abstracts": len(snp_pmids),
        "search_pmids": len(pmids),
        "skipped_pmids": sorted(missing),
        "top_disease_chemical_weight": max(
            len(ps) for (a, b), ps in pair_pmids.items() if concept_cat[b] == "Chemical"),
    }
    with open(os.path.join(root, "expected_stats.json"), "w") as f:
        json.dump(expected, f, indent=1, sort_keys=True)
        f.write("\n")
    with open(os.path.join(root, "diet_lexicon.txt"), "w") as f:
        f.write("# concept ids treated as diet related\n")
        f.write("\n".join(DIET_LEXICON) + "\n")


if __name__ == "__main__":
    main()
