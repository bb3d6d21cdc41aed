from pathlib import Path

import pytest

from wnexport.wndb import Pointer, WndbError, parse_data_line, read_data_file

MINI = Path(__file__).parent / "fixtures" / "mini_wndb"

DOG_LINE = (
    "02084071 05 n 03 dog 0 domestic_dog 0 Canis_familiaris 0 "
    "003 @ 00015388 n 0000 %p 02158846 n 0000 ~ 02085272 n 0000 | a member of the genus Canis"
)


def test_parse_dog_line():
    record = parse_data_line(DOG_LINE, 1)
    assert record.id == "n02084071"
    assert record.words == ("dog", "domestic_dog", "Canis_familiaris")
    assert record.pointers == (
        Pointer("@", "n00015388"),
        Pointer("%p", "n02158846"),
        Pointer("~", "n02085272"),
    )


def test_word_count_is_hexadecimal():
    line = "00000001 05 n 0a " + " ".join(f"w{i} 0" for i in range(10)) + " 000 | ten words"
    record = parse_data_line(line, 1)
    assert len(record.words) == 10


def test_verb_frame_data_is_skipped():
    line = "00001740 29 v 01 breathe 0 001 @ 00002325 v 0000 02 + 02 00 + 08 00 | draw air"
    record = parse_data_line(line, 1)
    assert record.id == "v00001740"
    assert record.pointers == (Pointer("@", "v00002325"),)


def test_satellite_adjectives_share_the_a_space():
    line = "00001234 00 s 01 quick 0 000 | fast"
    assert parse_data_line(line, 1).id == "a00001234"


def test_malformed_lines_raise_with_line_number():
    with pytest.raises(WndbError, match="line 3"):
        parse_data_line("00001740 03 n 02 entity 0 000 | truncated word list", 3)
    with pytest.raises(WndbError, match="bad synset offset"):
        parse_data_line("17 03 n 01 entity 0 000 | short offset", 1)


def test_read_data_file_skips_headers():
    records = list(read_data_file(MINI / "data.noun"))
    assert [r.id for r in records] == [
        "n00001740",
        "n00015388",
        "n02084071",
        "n02085272",
        "n02158846",
        "n09190918",
        "n14845743",
        "n14940386",
    ]
