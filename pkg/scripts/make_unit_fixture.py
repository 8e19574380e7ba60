#!/usr/bin/env python3
"""Build the shipped 12-answer annotation unit fixture.

The content is synthetic but structured to exercise every pipeline stage:
most sentences share tokens with the query (usefulness spread), two
answers contain a near-duplicate recommendation (redundancy pruning), and
bodies carry code blocks, inline code, links, and a long heading (cleaning
pipeline).
"""

import json
from pathlib import Path

from answersum.corpus import Answer, TechnicalQuery, build_unit, unit_to_dict

OUT = Path(__file__).resolve().parent.parent / "src" / "answersum" / "data"

QUERY = "How do I iterate over the entries of a map in Java?"

BODIES = [
    # 0: canonical entrySet answer, strong query overlap
    "<p>Use the entry set to iterate over the entries of the map. "
    "Each entry exposes the key and the value together.</p>"
    "<pre><code>for (Map.Entry&lt;K,V&gt; e : map.entrySet()) { ... }</code></pre>",
    # 1: near-duplicate of the recommendation in answer 0 (planted redundancy)
    "<p>Use the entry set to iterate over the entries of the map directly. "
    "This avoids a separate lookup for every key.</p>",
    # 2: keySet alternative
    "<p>You can iterate over the key set and call <code>get</code> for each key. "
    "That costs one extra lookup per key on large maps.</p>",
    # 3: forEach lambda
    "<p>On newer Java versions call <code>map.forEach</code> with a lambda. "
    "The lambda receives the key and the value as arguments.</p>",
    # 4: iterator removal caveat
    "<p>If you need to remove entries while you iterate, use the iterator "
    "of the entry set. Calling remove on the map itself throws "
    "a concurrent modification exception.</p>",
    # 5: heading + stream api
    "<h2>Iterate map entries with the stream api instead</h2>"
    "<p>Streams let you filter and map the entries in one pipeline. "
    "Collect the result back into a map when done.</p>",
    # 6: ordering note
    "<p>A hash map has no defined iteration order. "
    "Use a linked hash map when insertion order of the entries matters.</p>",
    # 7: link-heavy answer; one sentence is link-only and must vanish
    '<p><a href="https://docs.example.org/java/map">here</a></p>'
    "<p>The official docs explain the map interface in depth, "
    "see [external-link] style references for details.</p>",
    # 8: sorted iteration
    "<p>To iterate in key order, put the entries of the map into a tree map first. "
    "Tree map iteration follows the natural ordering of the keys.</p>",
    # 9: concurrency
    "<p>A concurrent hash map allows iteration while other threads update it. "
    "The iterator is weakly consistent and never throws.</p>",
    # 10: performance comparison, low query overlap
    "<p>Benchmarks show little difference for small collections. "
    "Readability should drive the choice of loop style.</p>",
    # 11: table + generic advice
    "<table><tr><td>style</td><td>cost</td></tr></table>"
    "<p>Whatever loop you pick, keep the body of the loop small. "
    "Extract helper methods when the logic grows.</p>",
]


def main() -> None:
    answers = [
        Answer(answer_index=i, body_html=body, vote_score=12 - i,
               source_post_id=9000 + i)
        for i, body in enumerate(BODIES)
    ]
    unit = build_unit(
        TechnicalQuery(text=QUERY, tags=frozenset({"java", "dictionary"})),
        answers,
    )
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / "unit_12answers.json"
    path.write_text(
        json.dumps(unit_to_dict(unit), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {path} ({len(unit.answers)} answers, "
          f"{len(unit.sentences)} sentences)")


if __name__ == "__main__":
    main()
