"""Shared fixtures: the book database, its nesting query, and the three
set-operation encodings used across the test suite."""

BOOKS_SCHEMA = "<books:{<isbn:dom,title:dom,year:dom>},authors:{<isbn:dom,name:dom>}>"

BOOKS_DATA = """
<books:{<isbn:"0072465638",title:"Database Management Systems",year:2002>,
        <isbn:"088175188X",title:"Principles of Database and Knowledge-base Systems",year:1988>},
 authors:{<isbn:"0072465638",name:"R. Ramakrishnan">,
          <isbn:"0072465638",name:"J. Gehrke">,
          <isbn:"088175188X",name:"J.D. Ullman">}>
"""

# Nest the authors of each book into the book tuple (nine steps).
NEST_AUTHORS_SCRIPT = """
copy authors -> books/*
delete books/*/year
rename books/*/authors/*/isbn isbn2
copy books/*/isbn -> books/*/authors/*
delete authors
select books/*/authors isbn isbn2
delete books/*/authors/*/isbn
delete books/*/authors/*/isbn2
elimtuple books/*/authors/*
"""

NEST_AUTHORS_RESULT_SCHEMA = "<books:{<authors:{dom},isbn:dom,title:dom>}>"

NEST_AUTHORS_RESULT = (
    '<books:{'
    '<authors:{"J. Gehrke","R. Ramakrishnan"},isbn:"0072465638",'
    'title:"Database Management Systems">,'
    '<authors:{"J.D. Ullman"},isbn:"088175188X",'
    'title:"Principles of Database and Knowledge-base Systems">'
    '}>'
)

# The same query as an algebra expression.
NEST_AUTHORS_EXPR = """
tuple(books:
  pairwith(books);
  map(tuple(isbn: proj(books); proj(isbn),
            title: proj(books); proj(title),
            authors: tuple(i: proj(books); proj(isbn), aus: proj(authors));
                     pairwith(aus);
                     map(tuple(isbn: proj(i),
                               isbn2: proj(aus); proj(isbn),
                               name: proj(aus); proj(name)));
                     select(isbn, isbn2);
                     map(proj(name)))))
"""

# Cartesian product R x S for binary relations, via two bulk moves.
CARTESIAN_SCHEMA = "<R:{<A:dom,B:dom>},S:{<C:dom,D:dom>}>"

CARTESIAN_SCRIPT = """
move S -> R/*
move R/*/A -> R/*/S/*
move R/*/B -> R/*/S/*
elimtuple .
elimtuple *
elimset *
"""

# Difference R - S for unary relations, using only equality selection.
DIFFERENCE_SCHEMA = "<R:{<A:dom>},S:{<A:dom>}>"

DIFFERENCE_SCRIPT = """
move S -> R/*
rename R/*/S/*/A A2
copy R/*/A -> R/*/S/*
select R/*/S A A2
newconst R/* S2 {}
elimtuple .
select . S S2
delete */S
delete */S2
"""

# Group the B attribute of R(A, B) into a set-valued attribute C.
NEST_REL_SCHEMA = "<R:{<A:dom,B:dom>}>"

NEST_REL_SCRIPT = """
copy R -> R/*
elimtuple .
delete */B
rename */R C
rename */C/*/A A2
copy */A -> */C/*
select */C A A2
delete */C/*/A
delete */C/*/A2
"""
