var s = new Slick('a');
console.log(s.slickAdd('b'), s.addSlide('c', 0, true), s.slides.join(','));
