#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gdeval/world.hpp"

namespace gdeval {

// Built-in distraction corpus: paragraph-length encyclopedia-style excerpts
// injected into status updates when the distraction channel is enabled.
// A plain-text file (one paragraph per line) can replace it via config.
inline const std::vector<std::string>& default_distraction_corpus() {
  static const std::vector<std::string> corpus = {
      "The Danube flows through ten countries, more than any other river in the world, before emptying into the Black Sea through a broad delta.",
      "Honey found in ancient Egyptian tombs has been reported to remain edible after thousands of years, thanks to its low moisture content and acidity.",
      "The Great Barrier Reef stretches over 2,300 kilometres along the coast of Queensland and is composed of roughly 2,900 individual reefs.",
      "Gutenberg's movable-type printing press, introduced around 1440, dramatically lowered the cost of books and accelerated the spread of literacy in Europe.",
      "A bolt of lightning can heat the surrounding air to about 30,000 kelvins, roughly five times hotter than the surface of the Sun.",
      "The Trans-Siberian Railway, completed in 1916, spans nearly 9,300 kilometres between Moscow and Vladivostok and crosses eight time zones.",
      "Octopuses have three hearts: two pump blood through the gills, while the third circulates it to the rest of the body.",
      "The Sahara was a green savanna with lakes and grasslands as recently as 6,000 years ago, supporting herds of grazing animals.",
      "Mount Kilimanjaro is the highest free-standing mountain in the world, rising about 4,900 metres from its base on the Tanzanian plains.",
      "The first successful powered flight by the Wright brothers in 1903 covered just 37 metres, shorter than the wingspan of a modern airliner.",
      "Venice is built on more than a hundred small islands in a lagoon, connected by over four hundred bridges.",
      "Sequoia trees can live for more than three thousand years, and their thick, fibrous bark makes them remarkably resistant to fire.",
      "The Antikythera mechanism, recovered from a Roman-era shipwreck, is an ancient Greek geared device used to predict astronomical positions.",
      "Antarctica holds about 60 percent of the world's fresh water, locked in an ice sheet averaging nearly two kilometres in thickness.",
      "The shortest war on record, between Britain and the Sultanate of Zanzibar in 1896, lasted less than an hour.",
      "Bamboo is among the fastest-growing plants on Earth; some species can grow almost a metre in a single day under ideal conditions.",
      "The Mariana Trench reaches a depth of nearly 11 kilometres, deep enough to submerge Mount Everest with room to spare.",
      "Roman concrete, made with volcanic ash, has allowed structures such as the Pantheon's dome to survive for nearly two millennia.",
      "Monarch butterflies migrate up to 4,800 kilometres between Canada and central Mexico, a journey spanning several generations.",
      "The Moon is slowly drifting away from Earth at about 3.8 centimetres per year, gradually lengthening the day.",
      "Iceland sits on the Mid-Atlantic Ridge, where the North American and Eurasian tectonic plates spread apart by a few centimetres each year.",
      "The Library of Alexandria was one of the largest centres of learning in the ancient world, reputedly holding hundreds of thousands of scrolls.",
      "Polar bears have black skin beneath their translucent fur, which helps them absorb and retain heat in Arctic conditions.",
      "The Dead Sea's surface lies more than 430 metres below sea level, making its shores the lowest dry land on Earth.",
      "Halley's Comet returns to the inner Solar System roughly every 76 years; its next appearance is expected in 2061.",
      "The human body contains about 37 trillion cells, and red blood cells alone are replaced at a rate of millions per second.",
      "The Silk Road was a network of trade routes linking China with the Mediterranean, carrying goods, technologies, and ideas for centuries.",
      "A single teaspoon of neutron star material would weigh billions of tonnes under Earth's gravity.",
      "The Amazon River discharges more water into the ocean than the next seven largest rivers combined.",
      "Cleopatra lived closer in time to the Moon landing than to the construction of the Great Pyramid of Giza.",
      "Some species of jellyfish, such as Turritopsis dohrnii, can revert from an adult stage back to a juvenile polyp, effectively restarting their life cycle.",
      "The Eiffel Tower grows about 15 centimetres taller in summer as its iron structure expands in the heat.",
      "Wombats produce cube-shaped droppings, which are thought to keep them from rolling off the rocks the animals use to mark territory.",
      "The Great Wall of China is not a single continuous wall but a network of fortifications built by successive dynasties over two millennia.",
      "Sharks existed before trees: the earliest sharks appeared over 400 million years ago, tens of millions of years before the first true trees.",
      "In 1783 the Laki fissure eruption in Iceland released enough sulphur dioxide to cool the Northern Hemisphere and disrupt harvests across Europe.",
      "Hummingbirds are the only birds able to fly backwards, beating their wings in a figure-of-eight pattern up to 80 times per second.",
      "The Mongol Empire of the thirteenth century became the largest contiguous land empire in history, stretching from Korea to Hungary.",
      "Water expands by about nine percent when it freezes, which is why ice floats and pipes burst in cold weather.",
      "The city of Istanbul straddles two continents, with districts on both the European and Asian shores of the Bosphorus.",
      "A day on Venus is longer than its year: the planet rotates once every 243 Earth days but orbits the Sun in about 225.",
      "Alexander Fleming discovered penicillin in 1928 after noticing that a stray mould contaminating a culture plate killed the surrounding bacteria.",
      "The Netherlands has reclaimed large areas of land from the sea; about a third of the country lies below sea level behind dikes and pumps.",
      "Ravens and crows can solve multi-step puzzles, use tools, and appear to plan for future events, rivaling great apes in some tests.",
      "The Richter scale is logarithmic: an earthquake of magnitude 7 releases about 32 times more energy than one of magnitude 6.",
      "The Rosetta Stone carries the same decree in three scripts, which allowed scholars to finally decipher Egyptian hieroglyphs in 1822.",
      "Jupiter's Great Red Spot is a storm larger than Earth that has been observed continuously for at least 190 years.",
      "Norway's coastline, including its fjords and islands, measures over 100,000 kilometres, more than twice the circumference of the Earth.",
      "Ants collectively weigh roughly as much as all wild birds and mammals combined, and some colonies span thousands of kilometres.",
      "The deepest hand-dug well, at Woodingdean in England, reaches 390 metres, deeper than the Empire State Building is tall.",
      "Tea was so valuable in parts of ancient Asia that compressed bricks of it circulated as currency along trade routes.",
      "The first photograph of a person was taken by accident in 1838, when a man having his boots shined stood still long enough to be captured.",
      "Greenland is the world's largest island that is not a continent, yet its population is smaller than that of many small towns.",
      "Sound travels about four times faster in water than in air, which is why whale song can carry across entire ocean basins.",
      "The Colosseum in Rome could reportedly be flooded for mock naval battles during the early years after its completion.",
      "Bees communicate the direction and distance of food sources through a waggle dance performed on the honeycomb.",
      "The Atacama Desert in Chile is the driest non-polar place on Earth; some weather stations there have never recorded rain.",
      "Isaac Newton developed much of his work on optics and gravitation while Cambridge was closed during the plague years of 1665 and 1666.",
      "An adult blue whale's heart weighs about 180 kilograms and beats as slowly as twice per minute when the animal dives.",
      "The Grand Canyon exposes nearly two billion years of geological history in its mile-deep walls.",
      "Finland has around 188,000 lakes, formed as the last ice age's glaciers scoured the bedrock and then melted.",
      "The original Olympic Games, held at Olympia from 776 BC, awarded victors a wreath of wild olive leaves rather than medals.",
      "Lobsters show negligible senescence: they continue to grow and moult throughout life, though moulting becomes riskier with size.",
      "The speed of light in a vacuum, about 299,792 kilometres per second, means sunlight takes just over eight minutes to reach Earth.",
      "Timbuktu was a major centre of Islamic scholarship in the medieval period, home to libraries holding hundreds of thousands of manuscripts.",
      "Maple syrup production requires about forty litres of sap to produce a single litre of syrup.",
      "The Channel Tunnel between England and France runs for 50 kilometres, 38 of them under the seabed.",
      "Giraffes have the same number of neck vertebrae as humans, seven, but each one can be over 25 centimetres long.",
      "The 1815 eruption of Mount Tambora caused the 'Year Without a Summer', with snow falling in New England in June 1816.",
      "Chess has more possible game positions than there are atoms in the observable universe.",
      "The Inca road system covered some 40,000 kilometres across the Andes, built without wheeled vehicles or iron tools.",
      "Seahorses are the only animals in which the male carries the developing young in a brood pouch until birth.",
      "The Petronas Towers in Kuala Lumpur were the tallest buildings in the world from 1998 to 2004 and remain the tallest twin towers.",
      "Glass flows so slowly at room temperature that medieval window panes' uneven thickness comes from manufacturing, not flow.",
      "The Gulf Stream transports warm water northwards at a rate far exceeding the combined flow of all the world's rivers.",
      "Tardigrades can survive desiccation, freezing, intense radiation, and even the vacuum of space by entering a dormant tun state.",
      "The Terracotta Army buried with China's first emperor comprises more than 8,000 life-sized soldiers, each with distinct facial features.",
      "Scotland's Bell Rock Lighthouse, finished in 1810, still stands on a reef that is submerged for most of each day.",
      "A single gram of DNA can in principle store around 215 petabytes of digital data.",
      "The Ottoman Empire lasted for more than six hundred years, ending only in 1922 after the First World War.",
      "Flamingos are born with grey feathers; their pink colour comes from carotenoid pigments in the algae and crustaceans they eat.",
      "Lake Baikal in Siberia holds about one fifth of the world's unfrozen fresh surface water and is the deepest lake on Earth.",
      "The QWERTY keyboard layout was designed in the 1870s partly to keep frequently paired typebars from jamming.",
      "Saturn's rings are made mostly of water ice and, despite spanning hundreds of thousands of kilometres, average only about ten metres thick.",
      "The Hanseatic League was a medieval confederation of merchant guilds that dominated trade across the Baltic and North Seas.",
      "Some bristlecone pines in California's White Mountains are estimated to be nearly 5,000 years old.",
      "The human brain uses roughly twenty percent of the body's energy despite accounting for only about two percent of its mass.",
      "Angel Falls in Venezuela drops 979 metres, so far that much of the water turns to mist before reaching the ground.",
      "The Suez Canal, opened in 1869, shortened the sea route between Europe and South Asia by about 7,000 kilometres.",
      "Platypuses are among the few venomous mammals: males carry a venomous spur on each hind leg.",
      "The Magna Carta of 1215 established the principle that the English crown was subject to the law, influencing constitutions worldwide.",
      "Clouds can weigh hundreds of tonnes; a typical cumulus cloud holds around half a million kilograms of water droplets.",
      "The first computer programmer is often considered to be Ada Lovelace, who wrote an algorithm for Babbage's Analytical Engine in 1843.",
      "Namib Desert beetles harvest drinking water by condensing fog on the bumpy surface of their wing cases.",
      "The Moai statues of Easter Island were likely moved upright, 'walked' along roads by teams pulling ropes from either side.",
      "Mercury has almost no atmosphere, so its surface swings from about 430 degrees Celsius by day to minus 180 at night.",
      "Coffee was reputedly discovered in Ethiopia after a goatherd noticed his animals becoming lively from eating certain red berries.",
      "The longest recorded flight of a paper aeroplane indoors lasted just under thirty seconds.",
      "The Baltic Sea is so low in salinity that large parts of it freeze over in a severe winter.",
      "Dragonflies are among the most successful aerial predators known, catching more than nine out of ten prey they pursue.",
  };
  return corpus;
}

// One paragraph per non-empty line.
inline std::vector<std::string> load_distraction_corpus(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open distraction corpus: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  if (out.empty()) throw ConfigError("distraction corpus is empty: " + path);
  return out;
}

}  // namespace gdeval
