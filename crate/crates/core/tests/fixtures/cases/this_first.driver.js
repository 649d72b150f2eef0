var sq = new Square();
console.log(sq.describe(), sq.area(3));
console.log(new Shape('blob').describe());
