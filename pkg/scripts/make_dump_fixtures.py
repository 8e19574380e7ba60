#!/usr/bin/env python3
"""Generate the small dump fixtures used by the test suite.

Layout: question 100 (java/spring) with duplicates 200 and 300 pools
exactly 12 surviving answers (one zero-score answer and one code-only
answer are dropped along the way); question 400 (python) with duplicate
500 pools only 9, so its unit is rejected by the 10..15 filter.  Question
600 (ruby) exists to exercise the wider negative-sampling pool.
"""

from pathlib import Path
from xml.sax.saxutils import quoteattr

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def row(**attrs) -> str:
    rendered = " ".join(f"{k}={quoteattr(str(v))}" for k, v in attrs.items())
    return f"  <row {rendered} />"


def tags(*names) -> str:
    return "".join(f"<{n}>" for n in names)


def answer_body(i: int, topic: str) -> str:
    return (
        f"<p>Approach {i}: prefer {topic} for this case. "
        f"It keeps the setup for {topic} explicit and easy to test.</p>"
    )


def main() -> None:
    posts = []
    # original question with two duplicates: 12 surviving answers
    posts.append(row(Id=100, PostTypeId=1, Title="How to configure dependency injection cleanly",
                     Body="<p>What is the cleanest way to wire dependencies?</p>",
                     Tags=tags("java", "spring"), Score=25))
    posts.append(row(Id=200, PostTypeId=1, Title="Configure dependency injection the clean way",
                     Body="<p>How should I wire my beans?</p>",
                     Tags=tags("java"), Score=11))
    posts.append(row(Id=300, PostTypeId=1, Title="Clean dependency injection configuration approach",
                     Body="<p>Best way to configure injection?</p>",
                     Tags=tags("java", "dependency-injection"), Score=7))

    topics = ["constructor injection", "setter injection", "field annotations",
              "factory beans", "configuration classes", "component scanning",
              "explicit wiring", "profiles", "qualifiers", "lazy initialization",
              "scoped beans", "interface binding"]
    # question 100: four good answers + one with no votes (dropped)
    for k in range(4):
        posts.append(row(Id=101 + k, PostTypeId=2, ParentId=100,
                         Body=answer_body(k + 1, topics[k]), Score=5 - k))
    posts.append(row(Id=105, PostTypeId=2, ParentId=100,
                     Body=answer_body(5, "unvoted advice"), Score=0))
    # question 200: four good answers + one code-only (dropped)
    for k in range(4):
        posts.append(row(Id=201 + k, PostTypeId=2, ParentId=200,
                         Body=answer_body(k + 5, topics[4 + k]), Score=3))
    posts.append(row(Id=205, PostTypeId=2, ParentId=200,
                     Body="<pre><code>@Inject Service service;</code></pre>",
                     Score=2))
    # question 300: four good answers
    for k in range(4):
        posts.append(row(Id=301 + k, PostTypeId=2, ParentId=300,
                         Body=answer_body(k + 9, topics[8 + k]), Score=2))

    # second original: only 9 surviving answers, unit must be dropped
    posts.append(row(Id=400, PostTypeId=1, Title="How to merge two dictionaries quickly",
                     Body="<p>What is the fastest way to merge dicts?</p>",
                     Tags=tags("python"), Score=30))
    posts.append(row(Id=500, PostTypeId=1, Title="Merge dictionaries fast in python",
                     Body="<p>Fast dict merge?</p>",
                     Tags=tags("python", "dictionary"), Score=9))
    merge_topics = ["the update method", "dict unpacking", "the union operator",
                    "chain maps", "comprehensions", "copy then update",
                    "itertools chaining", "reduce with update", "loop assignment"]
    for k in range(5):
        posts.append(row(Id=401 + k, PostTypeId=2, ParentId=400,
                         Body=answer_body(k + 1, merge_topics[k]), Score=4))
    for k in range(4):
        posts.append(row(Id=501 + k, PostTypeId=2, ParentId=500,
                         Body=answer_body(k + 6, merge_topics[5 + k]), Score=2))

    # out-of-language question for the wide negative pool
    posts.append(row(Id=600, PostTypeId=1, Title="Why does rails routing break here",
                     Body="<p>Routes stopped resolving.</p>",
                     Tags=tags("ruby", "rails"), Score=3))
    # rows the parser must skip: wiki post type, answer without body
    posts.append(row(Id=700, PostTypeId=4, Body="<p>tag wiki</p>", Score=0))
    posts.append(row(Id=701, PostTypeId=2, ParentId=100, Score=3))

    links = [
        row(Id=1, PostId=200, RelatedPostId=100, LinkTypeId=3),
        row(Id=2, PostId=300, RelatedPostId=100, LinkTypeId=3),
        row(Id=3, PostId=500, RelatedPostId=400, LinkTypeId=3),
        row(Id=4, PostId=600, RelatedPostId=100, LinkTypeId=1),
    ]

    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "Posts.xml").write_text(
        '<?xml version="1.0" encoding="utf-8"?>\n<posts>\n'
        + "\n".join(posts) + "\n</posts>\n",
        encoding="utf-8",
    )
    (OUT / "PostLinks.xml").write_text(
        '<?xml version="1.0" encoding="utf-8"?>\n<postlinks>\n'
        + "\n".join(links) + "\n</postlinks>\n",
        encoding="utf-8",
    )
    print(f"wrote {OUT / 'Posts.xml'} and {OUT / 'PostLinks.xml'}")


if __name__ == "__main__":
    main()
