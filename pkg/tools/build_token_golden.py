"""One-time generator for tests/fixtures/token_golden.json.

Runs the reference uncased WordPiece implementation (transformers'
BertTokenizer, backed by the tokenizers library) over the committed sentence
corpus with the shipped vocabulary, and freezes its output.  The test suite
asserts our tokenizer reproduces this file exactly.
"""

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

SENTENCES = [
    "The quick brown fox jumps over the lazy dog.",
    "She sells sea shells by the sea shore.",
    "A journey of a thousand miles begins with a single step.",
    "Playing football on Sunday morning became a family tradition.",
    "The president of the university announced a new research program.",
    "He was born in a small village near the northern border.",
    "Water flows from the mountain into the great river below.",
    "The film won three awards at the international festival.",
    "Doctors study diseases of the heart, brain, and blood.",
    "Quilt the skirt, then stitch or sew the edges together.",
    "Move upwards; lift one's eyes toward the light.",
    "Adorn with tinsel; snow flakes tinseled the trees.",
    "The frock is a garment; to frock is to dress someone.",
    "Spider-Man is a fictional character in comic books and films.",
    "An abnormal structure found in a previously normal organ.",
    "Enzymes are proteins that cause chemical change in cells.",
    "The population of the city grew by ten percent last year.",
    "Congress passed the law after a long public debate.",
    "Her second album reached the top of the national record charts.",
    "The team played well but lost the final game of the season.",
    "Bacteria and viruses cause many common infections.",
    "The museum's collection includes paintings from the 19th century.",
    "Students at the institute study language, history, and science.",
    "Economic growth slowed during the second quarter of 2008.",
    "The treaty established a new border between the two states.",
    "A verb expresses action; a noun names a person, place, or thing.",
    "Please summarize the description in one sentence as briefly as possible:",
    "You just need answer the regenerated text description!",
    "Use the shortest possible text to introduce the usage of the word.",
    "The capital city is located on the east coast of the island.",
    "Rain fell steadily through the night and into the morning.",
    "The committee will meet on Thursday to discuss the budget.",
    "His早 works were published under a different name.",
    "Café patrons enjoyed the naïve charm of the décor in Zürich.",
    "El Niño affects weather patterns across the Pacific Ocean.",
    "The protein binds to the receptor on the cell surface.",
    "They traveled 1,500 km along the coast in twelve days.",
    "The movie grossed $250,000,000 at the worldwide box office.",
    "Email me at test@example.com or visit https://example.org today.",
    "The international award ceremony was held in the grand hall.",
    "Wolves hunt in packs; a lone wolf rarely survives the winter.",
    "The judge dismissed the case for lack of evidence.",
    "Photosynthesis converts sunlight into chemical energy.",
    "The orchestra performed a symphony by a nineteenth-century composer.",
    "A triangle has three sides and three angles.",
    "The train departs from platform nine at half past ten.",
    "Volunteers planted ten thousand trees along the riverbank.",
    "The ancient manuscript was discovered in a mountain monastery.",
    "Negotiations between the two companies collapsed on Friday.",
    "The vaccine protects against several strains of the virus.",
    "Astronomy is the study of stars, planets, and galaxies.",
    "The bridge spans the widest part of the river valley.",
    "Unemployment fell to its lowest level in a decade.",
    "The poet wrote about love, loss, and the passage of time.",
    "Fishermen returned to the harbor before the storm arrived.",
    "The algorithm sorts the records by date and then by name.",
    "A severe drought damaged crops across the southern plains.",
    "The gallery exhibits modern sculpture and photography.",
    "Parliament voted to increase funding for public schools.",
    "The knight rode through the forest toward the castle gate.",
    "Engineers tested the strength of the new steel alloy.",
    "The island's economy depends on tourism and fishing.",
    "Chemists measured the reaction rate at various temperatures.",
    "The documentary examines the history of the labor movement.",
    "Sailors navigated by the stars long before modern instruments.",
    "The library holds over two million books and manuscripts.",
    "Archaeologists uncovered pottery dating from the Bronze Age.",
    "The senator announced her candidacy at a rally downtown.",
    "Farmers rotate their crops to preserve the soil.",
    "The opera house opened its doors to the public in 1891.",
    "Surgeons repaired the damaged valve in a six-hour operation.",
    "The festival celebrates music, food, and local crafts.",
    "Hikers followed the trail to the summit of the mountain.",
    "The novel was translated into thirty languages.",
    "Investors worried about rising interest rates.",
    "The choir sang hymns in the old stone church.",
    "Biologists tracked the migration of the herd across the plain.",
    "The factory produces engines for commercial aircraft.",
    "Teachers encouraged the students to ask questions.",
    "The mayor opened the new hospital wing on Monday.",
    "Pilots reported strong winds over the northern range.",
    "The painter mixed blue and yellow to make green.",
    "Lawyers argued the case before the supreme court.",
    "The drummer kept a steady beat through the long set.",
    "Gardeners pruned the roses before the first frost.",
    "The professor published a paper on medieval trade routes.",
    "Miners extracted copper ore from the deep shaft.",
    "The actress starred in a television series about lawyers.",
    "Chefs prepared a seven-course meal for the banquet.",
    "The referee stopped the match in the second half.",
    "Astronauts conducted experiments aboard the station.",
    "The tailor measured the cloth twice before cutting.",
    "Editors reviewed the manuscript for factual errors.",
    "The shepherd led the flock down from the high pasture.",
    "Dancers rehearsed the final scene until midnight.",
    "The clerk recorded each transaction in the ledger.",
    "Merchants traded silk and spices along the ancient road.",
    "The night watchman locked the gates at sunset.",
    "Economists forecast slower growth for the coming year.",
    "The supercalifragilisticexpialidocious word amused everyone tremendously.",
]


def main() -> None:
    import os

    os.environ.setdefault("HF_HUB_OFFLINE", "1")
    from transformers import BertTokenizer

    assert len(SENTENCES) == 100, len(SENTENCES)
    vocab_path = ROOT / "src" / "kgaug" / "resources" / "vocab.txt"
    reference = BertTokenizer(str(vocab_path))
    golden = [{"text": s, "tokens": reference.tokenize(s)} for s in SENTENCES]
    out = ROOT / "tests" / "fixtures" / "token_golden.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(golden, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {len(golden)} golden tokenizations to {out}")


if __name__ == "__main__":
    main()
