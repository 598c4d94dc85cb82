"""One-time generator for src/kgaug/resources/vocab.txt.

Builds a self-contained uncased subword vocabulary: special markers first,
then punctuation, digits and letters (standalone and as ## continuations),
a frequent-word list, and common suffix pieces.  Single-character coverage
guarantees any ASCII word tokenizes without the unknown token; only scripts
outside the character set (e.g. CJK) fall back to [UNK].

The output is committed; rerunning must reproduce it byte-identically.
"""

from pathlib import Path

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]

PUNCTUATION = list("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~") + ["–", "—", "‘", "’", "“", "”", "…", "°", "£", "€", "§"]

LETTERS = list("abcdefghijklmnopqrstuvwxyz")
DIGITS = list("0123456789")

# Frequent English words plus domain vocabulary (geography, media, biology,
# medicine, lexicography) so that typical entity descriptions tokenize into
# mostly whole words.
WORDS = """
the of and a to in is was it for on as with by that he she at from his her
its they which this had not are but have an or be one were all their there
been has when who will more no if out so said what up into them about than
can only other time new some could these two may first then do any like my
now over such our man me even most made after also did many before must
through back years where much your way well down should because each just
those people mr how too little state good very make world still own see
men work long get here between both life being under never day same
another know while last might us great old year off come since against go
came right used take three states himself few house use during without
again place american around however home small found thought went say part
once general high upon school every don does got united left number course
war until always away something fact though water less public put think
almost hand enough far took head yet government system better set told
nothing night end why called didn eyes find going look asked later knew
point next city business case week given group toward young let room
within social president family early often order white large person
several money possible rather among others seemed need important four am
second face per sure itself whether keep children began real john real
although turned saw want example members mind moment power country
question across service god area done along problem word whose form
help different away again off whole began air line kind door law less
live means four matter name perhaps say show side tell try asked
available become best body book boy brought call car certain change
clear close company consider cost couple court days death decided deep
development direction door drive economic education effect either
english entire especially evidence experience eye feel felt field figure
final five floor follow food foot force foreign free french full future
game gave girl give ground growth half hard hear heard heart history
hold hope hour human idea include increase indeed industry information
inside instead interest international job joined keep kept land language
late lay lead learn leave led letter level light likely list local
longer love lower main major makes making market material maybe meet
meeting mean member method middle might miles military million minute
modern month morning move movement music nation national nature near
nearly necessary needed needs neither news nor note nuclear office
official open operation opportunity outside paper particular party past
pay peace performance period personal phone picture piece plan play
police policy political population position practice present pressure
pretty private probably problem process produce product program provide
purpose quality question quite radio raise range rate reached read ready
reason receive recent record red religion remember report required
research respect rest result return road role run school science season
seat section security seem sense sent series serious serve seven shall
short shot similar simple simply single site situation six size society
someone soon sort sound source south space speak special specific spend
sport spring staff stage stand standard start station stay step stock
stop store story street strong structure student study stuff style
subject success summer support surface table talk tax team technology
television term test text theory thing third thus today together top
total town trade traditional training travel treatment tree trial trip
trouble true truth turn type understand unit university usually value
various view visit voice vote wait walk wall want watch weapon wear
weather west western wide wife wind window winter wish woman wonder
worker wrote yes yesterday young
north east wind equal born known actor actress film films movie movies
director producer television series episode season album band song
singer musician genre record label award awards nominated nomination
america character characters fictional comic novel author writer poet
book published publisher magazine newspaper
city cities town village county district province region country
countries capital located location state states area population river
lake mountain island coast border municipality km
university college school institute founded established member
association organization company corporation team club league football
baseball basketball soccer player played plays coach
disease diseases syndrome disorder symptom symptoms diagnosis treatment
therapy drug drugs medication patient patients clinical medical medicine
anatomy organ tissue cell cells gene genes protein proteins enzyme virus
bacteria bacterium infection immune blood heart brain nerve bone muscle
chemical substance compound acid molecular biology organism organisms
species animal animals plant plants mammal bird fish insect human beings
physical mental behavior function functions functional structure process
processes activity activities concept entity entities abstract object
objects category relationship relation relations attribute property
properties quantity measure temporal spatial occupation profession event
events phenomenon injury abnormality finding procedure device
language languages english french german spanish italian russian
chinese japanese dutch latin greek arabic portuguese korean
january february march april may june july august september october
november december monday tuesday wednesday thursday friday saturday
sunday
verb noun adjective adverb means meaning usage use used uses describe
description example sentence word words term phrase define definition
act action state quality manner degree cause make become change form
move cover cut hold bring carry put place set give take remove express
the quick brown fox jumps lazy dog
raise lift upward upwards quilt stitch sew skirt tinsel adorn snow
flakes trees frock dress garment spider spiderman marvel hero
summarize summary brief briefly sentence regenerate regenerated based
answer shortest possible introduce please just need text description
""".split()

SUFFIXES = """
s es ed ing er ers est ly al ally an ian ic ical ous ious ful less ness
ment tion tions sion ation ations ity ities ies y e n t d r m l k o p g h
b c f i j q u v w x z st nd rd th ter ton ville land ford berg burg field
wood man men son sons ism ist ists ize ise able ible ive ure age ate ish
like ward work time line side born ish ang ung ong ang er or ar en in on
un re de da la le li lo lu na ne ni no nu ra re ri ro ru sa se si so su
ta te ti to tu ka ke ki ko ku ha he hi ho hu ma me mi mo mu pa pe pi po pu
va ve vi vo vu wa we wi wo wu ya ye yi yo yu za ze zi zo zu ja je ji jo ju
ba be bi bo bu ca ce ci co cu fa fe fi fo fu ga ge gi go gu qa qe qi qo qu
xa xe xi xo xu ch sh ph gh ck ng nt nd mp lt rt ss ll tt pp mm nn rr dd
""".split()


def build() -> list[str]:
    vocab: list[str] = []
    seen: set[str] = set()

    def add(token: str) -> None:
        if token and token not in seen:
            seen.add(token)
            vocab.append(token)

    for tok in SPECIALS:
        add(tok)
    for ch in PUNCTUATION:
        add(ch)
    for ch in DIGITS:
        add(ch)
        add("##" + ch)
    for ch in LETTERS:
        add(ch)
        add("##" + ch)
    for word in sorted(set(WORDS)):
        add(word)
    for suf in sorted(set(SUFFIXES)):
        add("##" + suf)
    return vocab


def main() -> None:
    out = Path(__file__).resolve().parents[1] / "src" / "kgaug" / "resources" / "vocab.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    vocab = build()
    out.write_text("\n".join(vocab) + "\n", encoding="utf-8")
    print(f"wrote {len(vocab)} tokens to {out}")


if __name__ == "__main__":
    main()
